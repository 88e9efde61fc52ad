//! Quantum, modified-classical and classical momentum distributions after
//! 2.25 drive cycles. Pass `--full` for the production ensemble sizes.

use slowmo::experiments::{run_comparison, ComparisonCase, ExperimentConfig};
use slowmo::Result;

fn report(name: &str, case: &ComparisonCase) {
    println!("{name} (ε = {}):", case.epsilon);
    for (label, side) in ["quantum", "modified", "classical"].iter().zip(case.side_peaks) {
        match side {
            Some(p) => println!("  {label:>9} side peak |p| = {p:.4}"),
            None => println!("  {label:>9} side peak not found"),
        }
    }
    println!(
        "  bin width {:.4}, {} particles classified onto a resonance",
        case.bin_width(),
        case.particles_on_resonance
    );
}

fn main() -> Result<()> {
    let mut config = ExperimentConfig::default();
    if !std::env::args().any(|a| a == "--full") {
        config.comparison.quantum_packets = 32;
        config.comparison.classical_particles = 20_000;
    }
    let r = run_comparison(&config)?;
    report("modulated", &r.main);
    report("control", &r.control);
    Ok(())
}
