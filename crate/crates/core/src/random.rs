//! Seeded generators for random pmfs, channels, sources and Markov chains.
//!
//! Columns are drawn from the flat Dirichlet(1, ..., 1) law by normalizing
//! i.i.d. unit exponentials. Instance `i` of a suite seeded with `s` uses
//! ChaCha stream `i`, so results do not depend on how work is scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::leakage::MarkovChain;
use crate::probability::{Channel, JointSource, Pmf};

/// Deterministic generator for instance `index` of a run seeded with `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_pmf<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Pmf {
    loop {
        let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 && draws.iter().all(|&d| d > 0.0) {
            let probs = draws.into_iter().map(|d| d / total).collect();
            return Pmf::new(probs).expect("normalized exponentials form a pmf");
        }
    }
}

/// A channel with `outputs` rows whose `inputs` columns are independent draws.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, outputs: usize, inputs: usize) -> Channel {
    let columns: Vec<Pmf> = (0..inputs).map(|_| random_pmf(rng, outputs)).collect();
    Channel::from_columns(&columns).expect("random columns are valid")
}

pub fn random_source<R: Rng + ?Sized>(rng: &mut R, x_size: usize, y_size: usize) -> JointSource {
    loop {
        let p_y = random_pmf(rng, y_size);
        let ch = random_channel(rng, x_size, y_size);
        if let Ok(src) = JointSource::new(p_y, ch, None) {
            return src;
        }
    }
}

/// A point drawn uniformly from the probability simplex.
pub fn random_simplex_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    random_pmf(rng, n).into_vec()
}

/// A chain `A − B − C` with alphabet sizes `na`, `nb`, `nc`.
pub fn random_markov_chain<R: Rng + ?Sized>(
    rng: &mut R,
    na: usize,
    nb: usize,
    nc: usize,
) -> MarkovChain {
    let p_b = random_pmf(rng, nb);
    let p_a_given_b = random_channel(rng, na, nb);
    let p_c_given_b = random_channel(rng, nc, nb);
    MarkovChain::new(p_b, p_a_given_b, p_c_given_b).expect("dimensions agree")
}
