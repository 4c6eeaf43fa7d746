//! Full weight distribution from the dual code, checked against brute force.

use crcsel::codec::CodeSpec;
use crcsel::oracle::brute_force_spectrum;
use crcsel::spectrum::{dual_weight_distribution, primal_from_dual};

fn main() -> crcsel::error::Result<()> {
    let g = "59".parse()?;
    let dual = dual_weight_distribution(g, 25)?;
    let primal = primal_from_dual(&dual)?;
    for (w, c) in primal.entries() {
        println!("A_{w} = {c}");
    }
    let brute = brute_force_spectrum(&CodeSpec::new(g, 25)?)?;
    println!("matches brute force: {}", brute == primal);
    Ok(())
}
