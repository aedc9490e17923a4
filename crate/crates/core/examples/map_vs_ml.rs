//! Block error rate of ML and prior-aided MAP decoding on the (32, 8) code
//! when the payload is drawn from a Gaussian prior over quantizer cells.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wncs::control::{Mat, Vector};
use wncs::polar::{add_awgn, construct_code, modulate, ChannelConfig, Codebook, Decoder};
use wncs::quant::{prior_table, GaussianPrior, Quantizer};

fn main() -> wncs::Result<()> {
    let code = construct_code(32, 8, 0)?;
    let book = Codebook::new(&code)?;
    let q = Quantizer::new(5.0 / 256.0, 8, 1)?;
    let prior = GaussianPrior::new(Vector::zeros(1), Mat::from_element(1, 1, 2.825e-7))?;
    let table = prior_table(&q, &prior, 1e-10)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let blocks = 20_000;

    println!("{:>7} {:>10} {:>10}", "snr_db", "bler_ml", "bler_map");
    for snr in [-8.0, -6.0, -4.0, -2.0] {
        let ch = ChannelConfig::from_snr_db(snr)?;
        let mut dec = Decoder::new(&book);
        let (mut e_ml, mut e_map) = (0u32, 0u32);
        for _ in 0..blocks {
            let y = prior.mu()[0] + prior.sigma()[(0, 0)].sqrt() * rng.sample::<f64, _>(rand_distr::StandardNormal);
            let b = q.payload_of(&q.cell_of(&Vector::from_element(1, y))?);
            let r = add_awgn(&modulate(&book.codeword_bits(b)), &ch, &mut rng);
            let (ml, map) = dec.both(&r, &ch, &table)?;
            e_ml += (ml != b) as u32;
            e_map += (map != b) as u32;
        }
        println!("{snr:>7.1} {:>10.3e} {:>10.3e}", e_ml as f64 / blocks as f64, e_map as f64 / blocks as f64);
    }
    Ok(())
}
