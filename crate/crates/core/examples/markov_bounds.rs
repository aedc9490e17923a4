//! Transition-probability bounds for the consecutive-loss chain and the
//! resulting bounds on the stationary loss probability, at a few SNRs.

use wncs::bounds::{evaluate_bounds, BoundContext, MarkovBoundConfig};
use wncs::control::PlantModel;
use wncs::polar::construct_code;
use wncs::quant::Quantizer;

fn main() -> wncs::Result<()> {
    let ctx = BoundContext::new(
        PlantModel::scalar_reference(),
        Quantizer::new(5.0 / 256.0, 8, 1)?,
        construct_code(32, 8, 0)?,
        MarkovBoundConfig { mu_points: 256, ..Default::default() },
    )?;
    for snr in [-6.0, -3.0, 0.0] {
        let r = evaluate_bounds(&ctx, snr)?;
        println!("SNR {snr} dB   union bound {:.3e}", r.union_bound);
        if let Some(t) = &r.transitions {
            for (i, b) in t.iter().enumerate() {
                println!("  P(S{i} -> S{}) in [{:.3e}, {:.3e}]", i + 1, b.lo, b.hi);
            }
        }
        let show = |name: &str, b: Option<&wncs::bounds::BoundInterval>| {
            if let Some(b) = b {
                println!("  {name:<12} [{:.3e}, {:.3e}]", b.lo, b.hi);
            }
        };
        show("stationary", r.theorem2.as_ref());
        show("simplified", r.theorem3.as_ref());
        show("approx", r.corollary1.as_ref());
    }
    Ok(())
}
