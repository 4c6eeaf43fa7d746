//! Distance profile of one generator over a length interval.
//!
//! `cargo run --example analyze_profile -- 59 18 25`

use crcsel::metrics::cumulative_scores;
use crcsel::poly::Generator;
use crcsel::spectrum::distance_profile;

fn main() -> crcsel::error::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let g: Generator = args.first().map_or("59", String::as_str).parse()?;
    let l = args.get(1).map_or(Ok(18), |s| s.parse()).expect("min length");
    let m = args.get(2).map_or(Ok(25), |s| s.parse()).expect("max length");

    let profile = distance_profile(g, l, m)?;
    println!("g = {g}, reciprocal {}, order {}", g.reciprocal(), profile.order());
    for (n, d, a) in profile.lengths() {
        println!("n={n:>5}  d={d:>2}  A_d={a}");
    }
    let card = cumulative_scores(&profile);
    println!("S_d = {}, S_Ad = {}", card.s_d, card.s_ad);
    println!("runs: {}", profile.runs_notation());
    Ok(())
}
