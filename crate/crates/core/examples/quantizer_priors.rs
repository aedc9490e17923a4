//! Quantizes a few outputs and builds the truncated cell prior used by the
//! MAP decoder.

use wncs::control::{Mat, Vector};
use wncs::quant::{prior_table, GaussianPrior, Quantizer};

fn main() -> wncs::Result<()> {
    let q = Quantizer::new(5.0 / 256.0, 8, 1)?;
    println!("levels {}  delta {:.6e}", q.levels(), q.delta());
    for &y in &[-0.03, -1e-4, 0.0, 2.4e-4, 0.019] {
        let (q_hat, bits) = q.quantize_output(&Vector::from_element(1, y))?;
        println!("y = {y:+.6e}  ->  q = {:+.6e}  bits {:?}", q_hat[0], bits);
    }

    let prior = GaussianPrior::new(Vector::from_element(1, 1e-4), Mat::from_element(1, 1, 2.8e-7))?;
    let table = prior_table(&q, &prior, 1e-10)?;
    println!("\n{} cells cover 1 - {:.2e} of the prior", table.len(), 1.0 - table.covered_mass);
    let mut top = table.entries.clone();
    top.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (payload, p) in top.iter().take(5) {
        println!("  payload {payload:3}  P = {p:.6}");
    }

    let q2 = Quantizer::new(5.0, 10, 2)?;
    let prior2 = GaussianPrior::new(
        Vector::from_vec(vec![0.003, -0.004]),
        Mat::from_row_slice(2, 2, &[2.0e-4, 0.6e-4, 0.6e-4, 1.5e-4]),
    )?;
    let t2 = prior_table(&q2, &prior2, 1e-10)?;
    let total: f64 = t2.entries.iter().map(|e| e.1).sum();
    println!("\n2-D prior: {} cells, total mass {total:.12}", t2.len());
    Ok(())
}
