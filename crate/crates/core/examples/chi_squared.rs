//! Goodness-of-fit tests deciding whether a leaf's label counts differ from
//! chance.

use teachgram::ruleminer::{chi2_relabel, Chi2Config};

fn main() -> teachgram::Result<()> {
    let config = Chi2Config { min_leaf_support: 1, ..Chi2Config::default() };
    let cases: [(&[usize], &[f64]); 4] = [
        (&[30, 10], &[0.5, 0.5]),
        (&[20, 20], &[0.5, 0.5]),
        (&[95, 5], &[0.6, 0.4]),
        (&[12, 9, 11], &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]),
    ];
    for (counts, expected) in cases {
        let out = chi2_relabel(counts, expected, &config, None)?;
        println!(
            "{counts:?} vs {expected:.2?}: chi2 = {:.4}, df = {}, p = {:.4e} -> {:?}",
            out.statistic, out.df, out.p_value, out.verdict
        );
    }
    Ok(())
}
