//! Entropy-weight fusion of a small hand-made factor matrix.

use book_impact::entropy::score;
use book_impact::factors::Direction;
use book_impact::FactorMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let matrix = FactorMatrix::new(
        vec!["capital".into(), "leviathan".into(), "republic".into(), "wealth".into()],
        vec!["n_positive".into(), "n_negative".into(), "star_value".into(), "constant".into()],
        vec![
            vec![120.0, 8.0, 4.7, 1.0],
            vec![40.0, 15.0, 4.1, 1.0],
            vec![60.0, 3.0, 4.6, 1.0],
            vec![90.0, 12.0, 4.5, 1.0],
        ],
        vec![Direction::Benefit, Direction::Cost, Direction::Benefit, Direction::Benefit],
    )?;
    let report = score(&matrix)?;
    for (j, name) in matrix.factor_names.iter().enumerate() {
        println!(
            "{name:>10}: entropy {:.4} weight {:.4}{}",
            report.weights.entropy[j],
            report.weights.weight[j],
            if report.normalized.degenerate[j] { " (constant column)" } else { "" }
        );
    }
    for i in 0..matrix.n_books() {
        println!("{:>10}: score {:.4} rank {}", report.scores.book_ids[i], report.scores.scores[i], report.scores.ranks[i]);
    }
    Ok(())
}
