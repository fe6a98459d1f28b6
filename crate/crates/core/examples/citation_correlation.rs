//! Pearson and Spearman correlation with two-tailed significance.

use book_impact::analysis::{correlate, Method};
use book_impact::significance;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (r, n) in [(0.370, 40), (0.188, 40), (0.538, 40), (0.0, 30)] {
        let s = significance(r, n)?;
        println!("r = {r:.3}, n = {n}: t = {:.3}, p = {:.4} {}", s.t, s.p_two_tailed, s.stars());
    }

    let scores = [0.71, 0.42, 0.55, 0.13, 0.38, 0.90, 0.27];
    let citations = [88.0, 40.0, 31.0, 12.0, 35.0, 140.0, 20.0];
    for method in [Method::Pearson, Method::Spearman] {
        let c = correlate(&scores, &citations, method)?;
        println!("{method:?}: r = {:.3}, p = {:.4}", c.r, c.p_two_tailed);
    }
    Ok(())
}
