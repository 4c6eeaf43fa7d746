//! Regenerates the quick tables (p=6, p=11, p=16 and the short p=24 pair).
//! The full p=24 tables take minutes; use `crcsel tables vi` for those.

use crcsel::cli::{table, TableId};

fn main() -> crcsel::error::Result<()> {
    for id in [TableId::Iii, TableId::Iv, TableId::V, TableId::Vd] {
        println!("{}", table(id, 1)?.to_table());
    }
    Ok(())
}
