//! Star-tree sequence evolution: TKF91 insertions/deletions plus Jukes-Cantor
//! substitutions, with the true alignment recorded as it happens.
//!
//! Every branch draws from its own ChaCha stream keyed by
//! `(seed, replicate, branch)`, so replicates and branches can be simulated in
//! any order or in parallel with identical results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::path::AlignmentPath;
use crate::seqio::{Alphabet, Msa, Sequence, GAP};
use crate::tables::pairwise_path;

const BASES: &[u8; 4] = b"ACGT";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    /// Ancestor length N.
    pub n_ancestor: usize,
    /// Number of descendants K.
    pub k: usize,
    /// TKF91 insertion rate.
    pub lambda: f64,
    /// TKF91 deletion rate.
    pub mu: f64,
    /// Jukes-Cantor substitution rate.
    pub alpha: f64,
    pub branch_length: f64,
    pub seed: u64,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            n_ancestor: 100,
            k: 10,
            lambda: 0.03,
            mu: 0.03,
            alpha: 0.1,
            branch_length: 1.0,
            seed: 0,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        let rate_ok = |r: f64| r.is_finite() && r >= 0.0;
        if !rate_ok(self.lambda) || !rate_ok(self.mu) || !rate_ok(self.alpha) {
            return Err(Error::InvalidParameter(format!(
                "rates must be finite and nonnegative (lambda {}, mu {}, alpha {})",
                self.lambda, self.mu, self.alpha
            )));
        }
        if !(self.branch_length.is_finite() && self.branch_length > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "branch length must be positive, got {}",
                self.branch_length
            )));
        }
        if self.n_ancestor == 0 || self.k == 0 {
            return Err(Error::InvalidParameter("N and K must be at least 1".into()));
        }
        Ok(())
    }

    /// Probability that an ancestral residue survives one branch.
    pub fn survival_probability(&self) -> f64 {
        (-self.mu * self.branch_length).exp()
    }

    /// Probability that a surviving residue differs from its ancestor.
    pub fn mismatch_probability(&self) -> f64 {
        0.75 * (1.0 - (-4.0 * self.alpha * self.branch_length / 3.0).exp())
    }

    /// TKF91 `beta(t)`.
    fn beta(&self) -> f64 {
        let (l, m, t) = (self.lambda, self.mu, self.branch_length);
        if (l - m).abs() < 1e-12 {
            t / (1.0 + l * t)
        } else {
            let e = ((l - m) * t).exp();
            (1.0 - e) / (m - l * e)
        }
    }

    /// Continuation probability of the geometric insert runs, `lambda * beta`.
    pub fn insertion_continuation(&self) -> f64 {
        self.lambda * self.beta()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    pub ancestor: Sequence,
    pub descendants: Vec<Sequence>,
    /// True alignment, homologous columns flagged.
    pub reference: Msa,
    /// 1-based ancestor position of each homologous column, in column order.
    pub ancestor_positions: Vec<usize>,
}

impl SimOutput {
    /// Pairwise path between descendants `i` and `j` induced by the reference.
    pub fn reference_pairwise(&self, i: usize, j: usize) -> Result<AlignmentPath> {
        pairwise_path(&self.reference, i, j)
    }
}

/// What one branch did to the ancestor.
struct Branch {
    /// Descendant residue for each ancestral position, `None` if deleted.
    kept: Vec<Option<u8>>,
    /// `inserts[a]` follows ancestral position `a` (`a = 0`: the immortal link).
    inserts: Vec<Vec<u8>>,
}

fn rng_for(seed: u64, replicate: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&replicate.to_le_bytes());
    key[16..24].copy_from_slice(&stream.to_le_bytes());
    key[24..].copy_from_slice(b"tkf91-jc");
    ChaCha8Rng::from_seed(key)
}

fn random_base(rng: &mut impl Rng) -> u8 {
    BASES[rng.random_range(0..4)]
}

fn geometric(rng: &mut impl Rng, p: f64) -> usize {
    let mut k = 0;
    while rng.random::<f64>() < p {
        k += 1;
    }
    k
}

fn evolve_branch(ancestor: &[u8], params: &SimParams, rng: &mut impl Rng) -> Branch {
    let survive = params.survival_probability();
    let r = params.insertion_continuation();
    // dies, leaving no inserted descendants
    let die_empty = (params.mu * params.beta()).clamp(0.0, 1.0 - survive);
    let resample = 1.0 - (-4.0 * params.alpha * params.branch_length / 3.0).exp();

    let mut kept = Vec::with_capacity(ancestor.len());
    let mut inserts = Vec::with_capacity(ancestor.len() + 1);
    let run = |rng: &mut _, n: usize| -> Vec<u8> { (0..n).map(|_| random_base(rng)).collect() };
    let n0 = geometric(rng, r);
    inserts.push(run(rng, n0));
    for &a in ancestor {
        let x: f64 = rng.random();
        let count = if x < survive {
            let base = if rng.random::<f64>() < resample {
                random_base(rng)
            } else {
                a
            };
            kept.push(Some(base));
            geometric(rng, r)
        } else {
            kept.push(None);
            if x < 1.0 - die_empty {
                1 + geometric(rng, r)
            } else {
                0
            }
        };
        inserts.push(run(rng, count));
    }
    Branch { kept, inserts }
}

/// Simulates one data set (replicate 0).
pub fn simulate(params: &SimParams) -> Result<SimOutput> {
    simulate_replicate(params, 0)
}

/// Simulates replicate `replicate` of a benchmark run.
pub fn simulate_replicate(params: &SimParams, replicate: u64) -> Result<SimOutput> {
    params.validate()?;
    let mut rng = rng_for(params.seed, replicate, 0);
    let ancestor: Vec<u8> = (0..params.n_ancestor).map(|_| random_base(&mut rng)).collect();
    let branches: Vec<Branch> = (0..params.k)
        .map(|b| evolve_branch(&ancestor, params, &mut rng_for(params.seed, replicate, b as u64 + 1)))
        .collect();

    let k = params.k;
    let mut rows: Vec<Vec<u8>> = vec![Vec::new(); k];
    let mut homologous = std::collections::BTreeSet::new();
    let mut ancestor_positions = Vec::new();
    for a in 0..=params.n_ancestor {
        // one left-justified block per branch
        for (b, branch) in branches.iter().enumerate() {
            for &res in &branch.inserts[a] {
                for (r, row) in rows.iter_mut().enumerate() {
                    row.push(if r == b { res } else { GAP });
                }
            }
        }
        if a < params.n_ancestor && branches.iter().any(|br| br.kept[a].is_some()) {
            homologous.insert(rows[0].len());
            ancestor_positions.push(a + 1);
            for (row, branch) in rows.iter_mut().zip(&branches) {
                row.push(branch.kept[a].unwrap_or(GAP));
            }
        }
    }

    let ids: Vec<String> = (1..=k).map(|i| format!("s{i}")).collect();
    let reference = Msa::new(ids, rows)?.with_homologous_columns(homologous)?;
    let descendants = reference.sequences(Alphabet::Dna)?;
    Ok(SimOutput {
        ancestor: Sequence::new("ancestor", ancestor, Alphabet::Dna)?,
        descendants,
        reference,
        ancestor_positions,
    })
}
