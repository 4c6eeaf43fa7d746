//! Systematic encoding, checking and syndrome of a single error.

use crcsel::codec::{check, check_columns, encode, extract_info, syndrome, CodeSpec};
use crcsel::poly::Poly;

fn main() -> crcsel::error::Result<()> {
    let spec = CodeSpec::new("1864cfb".parse()?, 96)?;
    let info = Poly::parse_hex("deadbeefcafe")?;
    let word = encode(&spec, &info)?;
    println!("codeword {}", word.to_hex());
    println!("valid {}, info back {}", check(&spec, &word)?, extract_info(&spec, &word)?.to_hex());

    let mut bad = word.clone();
    bad.set_bit(40, !bad.bit(40));
    let cols = check_columns(spec.generator(), spec.n())?;
    println!("one flipped bit: valid {}, syndrome {:#x}", check(&spec, &bad)?, syndrome(&cols, &bad)?);
    Ok(())
}
