//! Burst detection per span for CRC-16 at n=64.

use crcsel::codec::{burst_coverage, CodeSpec, DEFAULT_BURST_CAP};

fn main() -> crcsel::error::Result<()> {
    let spec = CodeSpec::new("11021".parse()?, 64)?;
    for b in [8, 16, 17, 18, 20] {
        let c = burst_coverage(&spec, b, DEFAULT_BURST_CAP)?;
        println!("span {b:>2}: {} of {} undetected, detected {:.6}", c.undetected, c.patterns, c.fraction());
    }
    Ok(())
}
