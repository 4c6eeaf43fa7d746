//! P_ue and its first-term approximation for CRC-6 0x61 over [18..25],
//! written as CSV.

use crcsel::metrics::{curve_csv, curve_rows, ChannelModel};

fn main() -> crcsel::error::Result<()> {
    let eps: Vec<ChannelModel> = [1e-12, 1e-6, 1e-3, 1e-2]
        .into_iter()
        .map(ChannelModel::new)
        .collect::<Result<_, _>>()?;
    print!("{}", curve_csv(&curve_rows("61".parse()?, 18, 25, &eps)?));
    Ok(())
}
