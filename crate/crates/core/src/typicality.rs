//! Weak (entropy) typicality.
//!
//! A length-`n` sequence is ε-typical for a pmf `p` when its empirical
//! per-symbol log-loss is strictly within ε of `H(p)`. A tuple of sequences
//! is jointly typical when that holds for every non-empty subset of the
//! coordinates, each judged against its own marginal.
//!
//! Log-losses are evaluated from symbol counts (the sequence's type), summed
//! in symbol order. Verdicts therefore depend only on the type, and every
//! code path that reaches the same counts reaches the same verdict.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{entropy, JointTable};
use crate::source::check_symbols;

/// Default cap on the number of sequences an exhaustive sweep may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Maximum number of lines in a typical-set listing.
pub const LISTING_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypicalityParams {
    pub epsilon: f64,
    pub n: usize,
}

impl TypicalityParams {
    pub fn new(epsilon: f64, n: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("block length must be at least 1".into()));
        }
        Ok(TypicalityParams { epsilon, n })
    }
}

/// `2^(n (H + slack * ε))`: the cardinality bound for an unconditional
/// typical set (`slack = 1`) or a conditional one (`slack = 2`).
pub fn cardinality_bound(entropy: f64, params: &TypicalityParams, slack: f64) -> f64 {
    (params.n as f64 * (entropy + slack * params.epsilon)).exp2()
}

/// Per-symbol log-losses and entropy of one pmf.
#[derive(Debug, Clone)]
pub(crate) struct LogPmf {
    neglog: Vec<f64>,
    entropy: f64,
}

impl LogPmf {
    pub(crate) fn new(p: &[f64]) -> Self {
        let neglog = p.iter().map(|&pi| if pi > 0.0 { -pi.log2() } else { f64::INFINITY }).collect();
        LogPmf { neglog, entropy: entropy(p) }
    }

    /// `-(1/n) log2 p(seq)` for a sequence with the given symbol counts.
    pub(crate) fn log_loss(&self, counts: &[u32], n: usize) -> f64 {
        let mut total = 0.0;
        for (&c, &w) in counts.iter().zip(&self.neglog) {
            if c > 0 {
                total += c as f64 * w;
            }
        }
        total / n as f64
    }

    pub(crate) fn typical(&self, counts: &[u32], n: usize, epsilon: f64) -> bool {
        (self.log_loss(counts, n) - self.entropy).abs() < epsilon
    }
}

fn check_pmf(p: &[f64]) -> Result<()> {
    if p.is_empty() || p.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(Error::InvalidParameter("pmf must be non-empty with finite non-negative entries".into()));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > crate::source::PMF_TOLERANCE {
        return Err(Error::NotNormalized { sum });
    }
    Ok(())
}

fn check_length(seq: &[usize], params: &TypicalityParams) -> Result<()> {
    if seq.len() != params.n {
        return Err(Error::LengthMismatch { expected: params.n, found: seq.len() });
    }
    Ok(())
}

/// Single-sequence ε-typicality.
pub fn is_typical(seq: &[usize], p: &[f64], params: &TypicalityParams) -> Result<bool> {
    check_length(seq, params)?;
    check_pmf(p)?;
    check_symbols(seq, p.len())?;
    let mut counts = vec![0u32; p.len()];
    for &s in seq {
        counts[s] += 1;
    }
    Ok(LogPmf::new(p).typical(&counts, params.n, params.epsilon))
}

/// A pmf over a product of finite alphabets, row-major (last coordinate fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct ProductPmf {
    sizes: Vec<usize>,
    probs: Vec<f64>,
}

impl ProductPmf {
    pub fn new(sizes: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        let cells = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
        if sizes.is_empty() || sizes.contains(&0) || cells != Some(probs.len()) {
            return Err(Error::DimensionMismatch(format!(
                "{} probabilities do not fill alphabet sizes {sizes:?}",
                probs.len()
            )));
        }
        check_pmf(&probs)?;
        Ok(ProductPmf { sizes, probs })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    fn strides(sizes: &[usize]) -> Vec<usize> {
        let mut strides = vec![1; sizes.len()];
        for i in (0..sizes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        strides
    }

    /// Flat index of a symbol tuple.
    pub fn index(&self, symbols: &[usize]) -> usize {
        Self::strides(&self.sizes).iter().zip(symbols).map(|(s, x)| s * x).sum()
    }

    /// Marginal over the listed coordinates (kept in the listed order), together
    /// with the map from each full index to its marginal index.
    fn marginal_with_projection(&self, coords: &[usize]) -> (Vec<f64>, Vec<usize>) {
        let full_strides = Self::strides(&self.sizes);
        let sub_sizes: Vec<usize> = coords.iter().map(|&c| self.sizes[c]).collect();
        let sub_strides = Self::strides(&sub_sizes);
        let mut probs = vec![0.0; sub_sizes.iter().product()];
        let projection: Vec<usize> = (0..self.probs.len())
            .map(|full| {
                coords
                    .iter()
                    .zip(&sub_strides)
                    .map(|(&c, &st)| (full / full_strides[c]) % self.sizes[c] * st)
                    .sum()
            })
            .collect();
        for (full, &p) in self.probs.iter().enumerate() {
            probs[projection[full]] += p;
        }
        (probs, projection)
    }

    pub fn marginal(&self, coords: &[usize]) -> Vec<f64> {
        self.marginal_with_projection(coords).0
    }
}

impl From<&JointTable> for ProductPmf {
    fn from(t: &JointTable) -> Self {
        ProductPmf { sizes: vec![t.rows, t.cols], probs: t.probs.clone() }
    }
}

#[derive(Debug, Clone)]
struct SubsetTest {
    projection: Vec<usize>,
    log: LogPmf,
}

/// Precomputed joint-typicality test over all non-empty coordinate subsets.
#[derive(Debug, Clone)]
pub struct JointTypicality {
    joint: ProductPmf,
    subsets: Vec<SubsetTest>,
}

impl JointTypicality {
    pub fn new(joint: ProductPmf) -> Self {
        let k = joint.sizes.len();
        let subsets = (1u32..(1 << k))
            .map(|mask| {
                let coords: Vec<usize> = (0..k).filter(|&c| mask & (1 << c) != 0).collect();
                let (probs, projection) = joint.marginal_with_projection(&coords);
                SubsetTest { projection, log: LogPmf::new(&probs) }
            })
            .collect();
        JointTypicality { joint, subsets }
    }

    pub fn joint(&self) -> &ProductPmf {
        &self.joint
    }

    /// Number of subset conditions (`2^k - 1`).
    pub fn conditions(&self) -> usize {
        self.subsets.len()
    }

    /// Joint typicality of a type given as `(flat index, count)` pairs over the
    /// full product alphabet, with counts summing to `n`.
    pub fn typical_type(&self, cells: &[(usize, u32)], n: usize, epsilon: f64) -> bool {
        let mut scratch = Vec::new();
        self.subsets.iter().all(|sub| {
            scratch.clear();
            scratch.resize(sub.log.neglog.len(), 0u32);
            for &(full, c) in cells {
                scratch[sub.projection[full]] += c;
            }
            sub.log.typical(&scratch, n, epsilon)
        })
    }

    /// Joint typicality of one sequence per coordinate.
    pub fn check(&self, seqs: &[&[usize]], params: &TypicalityParams) -> Result<bool> {
        let sizes = &self.joint.sizes;
        if seqs.len() != sizes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} sequences for a {}-coordinate joint pmf",
                seqs.len(),
                sizes.len()
            )));
        }
        for (seq, &size) in seqs.iter().zip(sizes) {
            check_length(seq, params)?;
            check_symbols(seq, size)?;
        }
        let strides = ProductPmf::strides(sizes);
        let mut counts = vec![0u32; self.joint.probs.len()];
        for i in 0..params.n {
            let full: usize = seqs.iter().zip(&strides).map(|(s, st)| s[i] * st).sum();
            counts[full] += 1;
        }
        let cells: Vec<(usize, u32)> =
            counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i, c)).collect();
        Ok(self.typical_type(&cells, params.n, params.epsilon))
    }
}

/// Joint ε-typicality of a tuple of sequences against `joint`.
pub fn is_jointly_typical(seqs: &[&[usize]], joint: &ProductPmf, params: &TypicalityParams) -> Result<bool> {
    JointTypicality::new(joint.clone()).check(seqs, params)
}

/// Result of an exhaustive typical-set sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypicalSetSummary {
    pub n: usize,
    pub epsilon: f64,
    pub entropy: f64,
    pub cardinality: u64,
    pub probability_mass: f64,
    pub upper_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub listing: Option<Vec<String>>,
}

fn sequence_count(alphabet: usize, n: usize, budget: u64) -> Result<u64> {
    let required = (alphabet as u128).checked_pow(n as u32).filter(|_| n <= u32::MAX as usize);
    match required {
        Some(r) if r <= budget as u128 => Ok(r as u64),
        Some(r) => Err(Error::BudgetExceeded { required: r, budget }),
        None => Err(Error::BudgetExceeded { required: u128::MAX, budget }),
    }
}

/// Renders a sequence as a radix string, one character per symbol when the
/// alphabet fits in base 36, comma-separated indices otherwise.
pub fn radix_string(seq: &[usize], alphabet: usize) -> String {
    if alphabet <= 36 {
        seq.iter().map(|&s| char::from_digit(s as u32, 36).unwrap_or('?')).collect()
    } else {
        seq.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }
}

/// Odometer over `alphabet^n` sequences, keeping symbol counts in step.
struct Odometer {
    digits: Vec<usize>,
    counts: Vec<u32>,
    alphabet: usize,
}

impl Odometer {
    fn new(alphabet: usize, n: usize) -> Self {
        let mut counts = vec![0; alphabet];
        counts[0] = n as u32;
        Odometer { digits: vec![0; n], counts, alphabet }
    }

    fn advance(&mut self) -> bool {
        for d in self.digits.iter_mut().rev() {
            self.counts[*d] -= 1;
            if *d + 1 < self.alphabet {
                *d += 1;
                self.counts[*d] += 1;
                return true;
            }
            *d = 0;
            self.counts[0] += 1;
        }
        false
    }
}

/// Exact cardinality and mass of `A_ε^(n)` for a single pmf, by visiting every sequence.
pub fn enumerate_typical(
    p: &[f64],
    params: &TypicalityParams,
    budget: u64,
    listing: bool,
) -> Result<TypicalSetSummary> {
    check_pmf(p)?;
    sequence_count(p.len(), params.n, budget)?;
    let log = LogPmf::new(p);
    let n = params.n;
    let mut odo = Odometer::new(p.len(), n);
    let mut cardinality = 0u64;
    let mut mass = 0.0;
    let mut lines = listing.then(Vec::new);
    loop {
        let loss = log.log_loss(&odo.counts, n);
        if (loss - log.entropy).abs() < params.epsilon {
            cardinality += 1;
            mass += (-(n as f64) * loss).exp2();
            if let Some(lines) = lines.as_mut().filter(|l| l.len() < LISTING_CAP) {
                lines.push(radix_string(&odo.digits, p.len()));
            }
        }
        if !odo.advance() {
            break;
        }
    }
    Ok(TypicalSetSummary {
        n,
        epsilon: params.epsilon,
        entropy: log.entropy,
        cardinality,
        probability_mass: mass,
        upper_bound: cardinality_bound(log.entropy, params, 1.0),
        listing: lines,
    })
}

/// Exact cardinality and mass of the jointly typical set `A_ε^(n)(U_1, ..., U_k)`.
///
/// Listing entries render each position as its flat product-alphabet index.
pub fn enumerate_jointly_typical(
    joint: &ProductPmf,
    params: &TypicalityParams,
    budget: u64,
    listing: bool,
) -> Result<TypicalSetSummary> {
    let cells = joint.probs.len();
    sequence_count(cells, params.n, budget)?;
    let test = JointTypicality::new(joint.clone());
    let full = LogPmf::new(&joint.probs);
    let n = params.n;
    let mut odo = Odometer::new(cells, n);
    let mut cardinality = 0u64;
    let mut mass = 0.0;
    let mut lines = listing.then(Vec::new);
    let mut type_cells = Vec::with_capacity(cells);
    loop {
        type_cells.clear();
        type_cells.extend(odo.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i, c)));
        if test.typical_type(&type_cells, n, params.epsilon) {
            cardinality += 1;
            mass += (-(n as f64) * full.log_loss(&odo.counts, n)).exp2();
            if let Some(lines) = lines.as_mut().filter(|l| l.len() < LISTING_CAP) {
                lines.push(radix_string(&odo.digits, cells));
            }
        }
        if !odo.advance() {
            break;
        }
    }
    Ok(TypicalSetSummary {
        n,
        epsilon: params.epsilon,
        entropy: full.entropy,
        cardinality,
        probability_mass: mass,
        upper_bound: cardinality_bound(full.entropy, params, 1.0),
        listing: lines,
    })
}

/// `|A_ε^(n)(Z | y)|`: the number of z-sequences jointly typical with `y`
/// under a `Z x Y` joint table.
pub fn conditional_typical_count(
    y: &[usize],
    joint: &JointTable,
    params: &TypicalityParams,
    budget: u64,
) -> Result<u64> {
    check_length(y, params)?;
    check_symbols(y, joint.cols)?;
    sequence_count(joint.rows, params.n, budget)?;
    let test = JointTypicality::new(ProductPmf::new(vec![joint.rows, joint.cols], joint.probs.clone())?);
    let n = params.n;
    // y must be typical on its own for any z to qualify
    let mut y_counts = vec![0u32; joint.cols];
    y.iter().for_each(|&s| y_counts[s] += 1);
    if !LogPmf::new(&joint.col_marginal()).typical(&y_counts, n, params.epsilon) {
        return Ok(0);
    }
    let mut odo = Odometer::new(joint.rows, n);
    let mut counts = vec![0u32; joint.probs.len()];
    let mut cells = Vec::with_capacity(counts.len());
    let mut total = 0u64;
    loop {
        counts.iter_mut().for_each(|c| *c = 0);
        for (&z, &ys) in odo.digits.iter().zip(y) {
            counts[z * joint.cols + ys] += 1;
        }
        cells.clear();
        cells.extend(counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i, c)));
        if test.typical_type(&cells, n, params.epsilon) {
            total += 1;
        }
        if !odo.advance() {
            break;
        }
    }
    Ok(total)
}
