//! First-term comparison of two generators at a few lengths.

use crcsel::cli::compare;
use crcsel::metrics::ChannelModel;

fn main() -> crcsel::error::Result<()> {
    let eps = [ChannelModel::new(1e-12)?, ChannelModel::new(1e-6)?];
    let report = compare("e0f".parse()?, "e21".parse()?, 31, 1717, &eps, &[60, 130, 300, 1000])?;
    for row in &report.rows {
        for p in &row.points {
            println!(
                "n={:>4} eps={:e}  {:.3e} vs {:.3e}  improvement {:?}%",
                row.n, p.epsilon, p.p_ue_first_candidate, p.p_ue_first_reference, p.improvement_pct
            );
        }
    }
    Ok(())
}
