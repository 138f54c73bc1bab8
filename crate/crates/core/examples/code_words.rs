//! Binomial and cat code words: the cat sweet spot, Knill–Laflamme residuals under
//! {1, â} and the mean photon number of each word.

use qlattice::codes::{binomial_words, cat_words, kl_matrix, sweet_spot, sweet_spot_defect, CodeWordSet};
use qlattice::fockspace::{expect, ladder, number, HilbertConfig, Operator};

fn report(name: &str, w: &CodeWordSet, errors: &[Operator], n: &Operator) {
    let kl = kl_matrix(w, errors);
    println!(
        "{name}: <n> = {:.6} / {:.6}, KL diagonal {:.2e}, off-diagonal {:.2e}",
        expect(n, &w.zero_c).re,
        expect(n, &w.one_c).re,
        kl.max_diagonal,
        kl.max_off_diagonal
    );
}

fn main() -> qlattice::error::Result<()> {
    let cfg = HilbertConfig::default();
    let a2 = sweet_spot(1);
    println!("first sweet spot alpha^2 = {a2:.9} (defect {:.1e})", sweet_spot_defect(a2));
    let errors = [Operator::identity(cfg.dim, cfg.dim), ladder(&cfg)];
    let n = number(&cfg);
    report("binomial", &binomial_words(&cfg)?, &errors, &n);
    report("cat", &cat_words(&cfg, a2.sqrt())?, &errors, &n);
    Ok(())
}
