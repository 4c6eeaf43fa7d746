//! Monte Carlo P_ue on a binary symmetric channel against the exact value.

use crcsel::cli::simulate;
use crcsel::oracle::DEFAULT_SEED;

fn main() -> crcsel::error::Result<()> {
    let r = simulate("61".parse()?, 24, 0.01, 1_000_000, DEFAULT_SEED, 1)?;
    let e = &r.estimate;
    println!("{} undetected of {} ({} stream, seed {:#x})", e.undetected, e.trials, e.rng, e.seed);
    println!("estimate {:e} +- {:e}", e.estimate, e.stderr);
    println!("exact    {:e}", r.exact);
    println!("z        {:?}", r.z_score);
    Ok(())
}
