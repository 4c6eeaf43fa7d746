//! Named generators and their standard length intervals.

use crcsel::presets::{payload_to_length, NR_PRESETS};

fn main() -> crcsel::error::Result<()> {
    for p in NR_PRESETS {
        let g = p.generator();
        println!("{:<11} {:<9} p={:<2} [{}..{}] order {}", p.name, g.to_string(), p.p(), p.min_len, p.max_len, g.order()?);
    }
    println!("a 40-bit payload under CRC24 is n = {}", payload_to_length(40, 24)?);
    Ok(())
}
