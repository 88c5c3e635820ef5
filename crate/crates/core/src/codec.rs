//! Random-binning encoders and the unique-typical-z decoder.
//!
//! Every source sequence gets a 64-bit label derived from the master seed,
//! the encoder id and the sequence's radix value. A code of depth `k` bins a
//! sequence by the top `k` bits of its label, so the partition at depth
//! `k + 1` refines the one at depth `k` and bins stay uniform at every depth.
//!
//! Given bin indices `(i0, j0)`, the decoder collects every distinct
//! `z = F(x', y')` such that `(z, x', y')` is jointly ε-typical for some
//! `x'` in bin `i0` and `y'` in bin `j0`, and outputs `z` when exactly one
//! such sequence exists.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::source::{check_symbols, FunctionSpec, JointSource, SequencePair};
use crate::stream::derive;
use crate::typicality::{JointTypicality, LogPmf, ProductPmf, TypicalityParams, DEFAULT_BUDGET};

/// Largest supported bin depth, in bits.
pub const MAX_BIN_BITS: u32 = 62;

const X_ENCODER: u64 = 1;
const Y_ENCODER: u64 = 2;

/// Slack applied before rounding `n * r` up, so that rates like `0.3` at
/// `n = 10` give 3 bits rather than 4.
const RATE_ROUNDING_SLACK: f64 = 1e-9;

/// Largest verdict lookup table, in entries.
const TYPE_TABLE_LIMIT: u64 = 1 << 22;

/// A pair of nested random-binning encoders `(f1, f2)` for block length `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinningCode {
    pub n: usize,
    pub x_size: usize,
    pub y_size: usize,
    pub k1: u32,
    pub k2: u32,
    pub r1_nominal: f64,
    pub r2_nominal: f64,
    pub master_seed: u64,
}

fn bin_depth(n: usize, r: f64) -> Result<u32> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("rate must be finite and non-negative, got {r}")));
    }
    let k = (n as f64 * r - RATE_ROUNDING_SLACK).ceil().max(0.0);
    if k > MAX_BIN_BITS as f64 {
        return Err(Error::RateCap { k: k.min(u64::MAX as f64) as u64, cap: MAX_BIN_BITS });
    }
    Ok(k as u32)
}

/// Radix value of a sequence, most significant symbol first.
pub fn radix_value(seq: &[usize], alphabet: usize) -> Option<u128> {
    seq.iter()
        .try_fold(0u128, |acc, &s| acc.checked_mul(alphabet as u128)?.checked_add(s as u128))
}

impl BinningCode {
    /// Builds the code with `k = ceil(n r)` bits per encoder.
    pub fn new(n: usize, x_size: usize, y_size: usize, r1: f64, r2: f64, master_seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("block length must be at least 1".into()));
        }
        if x_size == 0 || y_size == 0 {
            return Err(Error::InvalidParameter("alphabet sizes must be at least 1".into()));
        }
        Ok(BinningCode {
            n,
            x_size,
            y_size,
            k1: bin_depth(n, r1)?,
            k2: bin_depth(n, r2)?,
            r1_nominal: r1,
            r2_nominal: r2,
            master_seed,
        })
    }

    /// Same labels, different depths.
    pub fn with_depths(&self, k1: u32, k2: u32) -> Result<Self> {
        if k1 > MAX_BIN_BITS || k2 > MAX_BIN_BITS {
            return Err(Error::RateCap { k: k1.max(k2) as u64, cap: MAX_BIN_BITS });
        }
        Ok(BinningCode {
            k1,
            k2,
            r1_nominal: k1 as f64 / self.n as f64,
            r2_nominal: k2 as f64 / self.n as f64,
            ..self.clone()
        })
    }

    pub fn r1_effective(&self) -> f64 {
        self.k1 as f64 / self.n as f64
    }

    pub fn r2_effective(&self) -> f64 {
        self.k2 as f64 / self.n as f64
    }

    fn label(&self, encoder: u64, radix: u128) -> u64 {
        derive(self.master_seed, &[encoder, self.n as u64, radix as u64, (radix >> 64) as u64])
    }

    pub fn x_label(&self, radix: u128) -> u64 {
        self.label(X_ENCODER, radix)
    }

    pub fn y_label(&self, radix: u128) -> u64 {
        self.label(Y_ENCODER, radix)
    }

    /// Top `k` bits of a label.
    #[inline]
    pub fn bin_of(label: u64, k: u32) -> u64 {
        if k == 0 {
            0
        } else {
            label >> (64 - k)
        }
    }

    fn radix_checked(&self, seq: &[usize], alphabet: usize) -> Result<u128> {
        if seq.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: seq.len() });
        }
        check_symbols(seq, alphabet)?;
        radix_value(seq, alphabet)
            .ok_or_else(|| Error::InvalidParameter(format!("{alphabet}^{} sequences exceed 128-bit indices", self.n)))
    }

    /// `f1(x)`.
    pub fn encode_x(&self, xs: &[usize]) -> Result<u64> {
        Ok(Self::bin_of(self.x_label(self.radix_checked(xs, self.x_size)?), self.k1))
    }

    /// `f2(y)`.
    pub fn encode_y(&self, ys: &[usize]) -> Result<u64> {
        Ok(Self::bin_of(self.y_label(self.radix_checked(ys, self.y_size)?), self.k2))
    }

    pub fn encode(&self, pair: &SequencePair) -> Result<EncodedMessage> {
        Ok(EncodedMessage { i0: self.encode_x(&pair.xs)?, j0: self.encode_y(&pair.ys)? })
    }
}

/// Free-function form of [`BinningCode::new`].
pub fn build_code(n: usize, x_size: usize, y_size: usize, r1: f64, r2: f64, master_seed: u64) -> Result<BinningCode> {
    BinningCode::new(n, x_size, y_size, r1, r2, master_seed)
}

/// Free-function form of [`BinningCode::encode`].
pub fn encode(code: &BinningCode, pair: &SequencePair) -> Result<EncodedMessage> {
    code.encode(pair)
}

/// The pair of bin indices seen by the decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EncodedMessage {
    pub i0: u64,
    pub j0: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Success,
    Error,
}

/// Reported error class, in priority order E0 > E1 > E2 > E12.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErrorClass {
    #[serde(rename = "none")]
    None,
    /// No jointly typical triple is reachable from the received bins.
    #[serde(rename = "E0_no_candidate")]
    E0NoCandidate,
    /// A wrong z is reachable from `(x', Y)` with `x'` in the true x-bin.
    #[serde(rename = "E1_x_confusion")]
    E1XConfusion,
    /// A wrong z is reachable from `(X, y')` with `y'` in the true y-bin.
    #[serde(rename = "E2_y_confusion")]
    E2YConfusion,
    /// A wrong z is reachable only through pairs differing in both coordinates.
    #[serde(rename = "E12_joint_confusion")]
    E12JointConfusion,
}

/// Raw error-event indicators for one trial.
///
/// `e12` covers every in-bin pair, including those sharing the true x or y,
/// so `e1` and `e2` each imply `e12`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventFlags {
    pub e0: bool,
    pub e1: bool,
    pub e2: bool,
    pub e12: bool,
}

/// Reported class for an erroneous decode.
pub fn classify_error(events: &EventFlags) -> Result<ErrorClass> {
    Ok(if events.e0 {
        ErrorClass::E0NoCandidate
    } else if events.e1 {
        ErrorClass::E1XConfusion
    } else if events.e2 {
        ErrorClass::E2YConfusion
    } else if events.e12 {
        ErrorClass::E12JointConfusion
    } else {
        return Err(Error::NotAnError);
    })
}

/// Decoder output without reference to the true sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Estimate {
    pub decoded_z: Option<Vec<usize>>,
    pub candidate_count: usize,
}

/// Decode result judged against the true source pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub message: EncodedMessage,
    pub verdict: Verdict,
    pub error_class: ErrorClass,
    pub decoded_z: Option<Vec<usize>>,
    pub candidate_count: usize,
    pub events: EventFlags,
    /// Whether `(F(X,Y), X, Y)` itself is jointly typical.
    pub truth_typical: bool,
}

impl DecodeOutcome {
    pub fn is_success(&self) -> bool {
        self.verdict == Verdict::Success
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecoderOptions {
    /// Cap on `|X|^n |Y|^n` (times `|Z|^n` in full-z mode).
    pub budget: u64,
    /// Test every `z` in `Z^n` against each in-bin pair, not only `F(x', y')`.
    pub full_z: bool,
}

impl Default for DecoderOptions {
    fn default() -> Self {
        DecoderOptions { budget: DEFAULT_BUDGET, full_z: false }
    }
}

/// Members of one encoder's bins that are typical for that encoder's
/// marginal, sorted by bin. Sequences failing their own marginal test can
/// never appear in a jointly typical triple.
#[derive(Debug)]
struct SideTable {
    n: usize,
    alphabet: usize,
    words: usize,
    bins: Vec<u64>,
    radices: Vec<u128>,
    digits: Vec<u8>,
    planes: Vec<u64>,
}

impl SideTable {
    fn build(n: usize, alphabet: usize, marginal: &[f64], epsilon: f64, depth: u32, label: impl Fn(u128) -> u64) -> Self {
        let log = LogPmf::new(marginal);
        let words = n.div_ceil(64);
        let total = (alphabet as u128).pow(n as u32);
        let mut rows: Vec<(u64, u128)> = Vec::new();
        let mut digits = vec![0usize; n];
        let mut counts = vec![0u32; alphabet];
        for radix in 0..total {
            if radix > 0 {
                for d in digits.iter_mut().rev() {
                    *d += 1;
                    if *d < alphabet {
                        break;
                    }
                    *d = 0;
                }
            }
            counts.iter_mut().for_each(|c| *c = 0);
            digits.iter().for_each(|&s| counts[s] += 1);
            if log.typical(&counts, n, epsilon) {
                rows.push((BinningCode::bin_of(label(radix), depth), radix));
            }
        }
        rows.sort_unstable();

        let mut table = SideTable {
            n,
            alphabet,
            words,
            bins: Vec::with_capacity(rows.len()),
            radices: Vec::with_capacity(rows.len()),
            digits: Vec::with_capacity(rows.len() * n),
            planes: vec![0; rows.len() * alphabet * words],
        };
        for (row, &(bin, radix)) in rows.iter().enumerate() {
            table.bins.push(bin);
            table.radices.push(radix);
            let mut v = radix;
            let start = table.digits.len();
            table.digits.resize(start + n, 0);
            for pos in (0..n).rev() {
                let s = (v % alphabet as u128) as usize;
                v /= alphabet as u128;
                table.digits[start + pos] = s as u8;
                table.planes[(row * alphabet + s) * words + pos / 64] |= 1 << (pos % 64);
            }
        }
        table
    }

    fn range(&self, bin: u64) -> Range<usize> {
        self.bins.partition_point(|&b| b < bin)..self.bins.partition_point(|&b| b <= bin)
    }

    fn row_of(&self, bin: u64, radix: u128) -> Option<usize> {
        let r = self.range(bin);
        self.radices[r.clone()].binary_search(&radix).ok().map(|i| r.start + i)
    }

    fn digits(&self, row: usize) -> &[u8] {
        &self.digits[row * self.n..(row + 1) * self.n]
    }

    fn plane(&self, row: usize, symbol: usize) -> &[u64] {
        let at = (row * self.alphabet + symbol) * self.words;
        &self.planes[at..at + self.words]
    }
}

/// Distinct typical z-sequences reachable from one bin pair, as sorted radix values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    pub zs: Vec<u128>,
}

/// The joint-typicality decoder for one code, source and function.
///
/// Construction enumerates both sequence spaces once. Afterwards the decoder
/// is read-only apart from an internal cache of candidate sets per bin pair,
/// and may be shared across threads.
#[derive(Debug)]
pub struct Decoder {
    code: BinningCode,
    f: FunctionSpec,
    params: TypicalityParams,
    options: DecoderOptions,
    test: JointTypicality,
    x_side: SideTable,
    y_side: SideTable,
    /// Flat (Z, X, Y) index of each (x, y) cell.
    cell_index: Vec<usize>,
    type_table: Option<TypeTable>,
    cache: Mutex<HashMap<EncodedMessage, Arc<CandidateSet>>>,
}

/// Precomputed joint-typicality verdicts for every joint type of `(x', y')`,
/// keyed by the counts in base `n + 1`.
#[derive(Debug)]
struct TypeTable {
    radix: u64,
    verdicts: Vec<bool>,
}

impl TypeTable {
    fn build(test: &JointTypicality, cell_index: &[usize], n: usize, epsilon: f64) -> Option<Self> {
        let radix = n as u64 + 1;
        let size = radix.checked_pow(cell_index.len() as u32).filter(|&s| s <= TYPE_TABLE_LIMIT)?;
        let mut verdicts = vec![false; size as usize];
        let mut counts = vec![0u32; cell_index.len()];
        fill_compositions(&mut counts, 0, n as u32, &mut |counts| {
            let key = counts.iter().rev().fold(0u64, |acc, &c| acc * radix + c as u64);
            let cells: Vec<(usize, u32)> =
                counts.iter().zip(cell_index).filter(|(&c, _)| c > 0).map(|(&c, &i)| (i, c)).collect();
            verdicts[key as usize] = test.typical_type(&cells, n, epsilon);
        });
        Some(TypeTable { radix, verdicts })
    }
}

fn fill_compositions(counts: &mut [u32], at: usize, left: u32, visit: &mut impl FnMut(&[u32])) {
    if at + 1 == counts.len() {
        counts[at] = left;
        visit(counts);
        return;
    }
    for c in 0..=left {
        counts[at] = c;
        fill_compositions(counts, at + 1, left - c, visit);
    }
}

/// `(F(X,Y), X, Y)` joint pmf with coordinates ordered `(Z, X, Y)`.
pub fn zxy_joint(src: &JointSource, f: &FunctionSpec) -> Result<ProductPmf> {
    f.check_source(src)?;
    let (xs, ys) = (src.x_size(), src.y_size());
    let mut probs = vec![0.0; f.z_size() * xs * ys];
    for x in 0..xs {
        for y in 0..ys {
            probs[f.eval(x, y) * xs * ys + x * ys + y] = src.p(x, y);
        }
    }
    ProductPmf::new(vec![f.z_size(), xs, ys], probs)
}

fn required_work(code: &BinningCode, f: &FunctionSpec, full_z: bool) -> Option<u128> {
    let n = u32::try_from(code.n).ok()?;
    let pairs = (code.x_size as u128).checked_pow(n)?.checked_mul((code.y_size as u128).checked_pow(n)?)?;
    if full_z {
        pairs.checked_mul((f.z_size() as u128).checked_pow(n)?)
    } else {
        Some(pairs)
    }
}

impl Decoder {
    pub fn new(
        code: &BinningCode,
        src: &JointSource,
        f: &FunctionSpec,
        params: TypicalityParams,
        options: DecoderOptions,
    ) -> Result<Self> {
        f.check_source(src)?;
        if code.x_size != src.x_size() || code.y_size != src.y_size() {
            return Err(Error::DimensionMismatch("code alphabets do not match the source".into()));
        }
        if params.n != code.n {
            return Err(Error::DimensionMismatch(format!(
                "typicality block length {} differs from code block length {}",
                params.n, code.n
            )));
        }
        match required_work(code, f, options.full_z) {
            Some(r) if r <= options.budget as u128 => {}
            r => return Err(Error::BudgetExceeded { required: r.unwrap_or(u128::MAX), budget: options.budget }),
        }
        if src.x_size() > 256 || src.y_size() > 256 {
            return Err(Error::InvalidParameter("decoder supports alphabets of at most 256 symbols".into()));
        }
        if (f.z_size() as u128).checked_pow(code.n as u32).is_none() {
            return Err(Error::InvalidParameter("z-sequences exceed 128-bit indices".into()));
        }

        let test = JointTypicality::new(zxy_joint(src, f)?);
        let (px, py) = src.marginals();
        let eps = params.epsilon;
        let x_side = SideTable::build(code.n, src.x_size(), &px, eps, code.k1, |r| code.x_label(r));
        let y_side = SideTable::build(code.n, src.y_size(), &py, eps, code.k2, |r| code.y_label(r));
        let xy = src.x_size() * src.y_size();
        let cell_index: Vec<usize> = (0..xy).map(|cell| f.table()[cell] * xy + cell).collect();
        let type_table = TypeTable::build(&test, &cell_index, code.n, eps);
        Ok(Decoder {
            code: code.clone(),
            f: f.clone(),
            params,
            options,
            test,
            x_side,
            y_side,
            cell_index,
            type_table,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn code(&self) -> &BinningCode {
        &self.code
    }

    pub fn params(&self) -> &TypicalityParams {
        &self.params
    }

    pub fn function(&self) -> &FunctionSpec {
        &self.f
    }

    /// Joint typicality of `(F(x', y'), x', y')` for two table rows.
    fn pair_typical(&self, xr: usize, yr: usize) -> bool {
        let ys = self.y_side.alphabet;
        let n = self.code.n;
        match &self.type_table {
            Some(table) => {
                let mut key = 0u64;
                for x in (0..self.x_side.alphabet).rev() {
                    let xp = self.x_side.plane(xr, x);
                    for y in (0..ys).rev() {
                        let yp = self.y_side.plane(yr, y);
                        let c: u32 = xp.iter().zip(yp).map(|(a, b)| (a & b).count_ones()).sum();
                        key = key * table.radix + c as u64;
                    }
                }
                table.verdicts[key as usize]
            }
            None => {
                let mut counts = vec![0u32; self.cell_index.len()];
                for (&x, &y) in self.x_side.digits(xr).iter().zip(self.y_side.digits(yr)) {
                    counts[x as usize * ys + y as usize] += 1;
                }
                let cells: Vec<(usize, u32)> = counts
                    .iter()
                    .zip(&self.cell_index)
                    .filter(|(&c, _)| c > 0)
                    .map(|(&c, &i)| (i, c))
                    .collect();
                self.test.typical_type(&cells, n, self.params.epsilon)
            }
        }
    }

    fn z_key(&self, xr: usize, yr: usize) -> u128 {
        let zs = self.f.z_size() as u128;
        self.x_side
            .digits(xr)
            .iter()
            .zip(self.y_side.digits(yr))
            .fold(0u128, |acc, (&x, &y)| acc * zs + self.f.eval(x as usize, y as usize) as u128)
    }

    fn z_digits(&self, mut key: u128) -> Vec<usize> {
        let zs = self.f.z_size() as u128;
        let mut z = vec![0; self.code.n];
        for d in z.iter_mut().rev() {
            *d = (key % zs) as usize;
            key /= zs;
        }
        z
    }

    fn widen(digits: &[u8]) -> Vec<usize> {
        digits.iter().map(|&d| d as usize).collect()
    }

    /// Every z in `Z^n` jointly typical with the given rows (full-z mode).
    fn typical_zs(&self, xr: usize, yr: usize) -> Vec<u128> {
        let (x, y) = (Self::widen(self.x_side.digits(xr)), Self::widen(self.y_side.digits(yr)));
        let total = (self.f.z_size() as u128).pow(self.code.n as u32);
        (0..total)
            .filter(|&key| {
                let z = self.z_digits(key);
                self.test.check(&[&z, &x, &y], &self.params).unwrap_or(false)
            })
            .collect()
    }

    fn scan(&self, msg: EncodedMessage) -> CandidateSet {
        let mut set = BTreeSet::new();
        for xr in self.x_side.range(msg.i0) {
            for yr in self.y_side.range(msg.j0) {
                if self.options.full_z {
                    set.extend(self.typical_zs(xr, yr));
                } else if self.pair_typical(xr, yr) {
                    set.insert(self.z_key(xr, yr));
                }
            }
        }
        CandidateSet { zs: set.into_iter().collect() }
    }

    /// Candidate set for a received message, cached per bin pair.
    pub fn candidates(&self, msg: EncodedMessage) -> Arc<CandidateSet> {
        if let Some(hit) = self.cache.lock().expect("candidate cache poisoned").get(&msg) {
            return Arc::clone(hit);
        }
        let computed = Arc::new(self.scan(msg));
        let mut cache = self.cache.lock().expect("candidate cache poisoned");
        Arc::clone(cache.entry(msg).or_insert(computed))
    }

    /// The decoding function `g`.
    pub fn decode(&self, msg: EncodedMessage) -> Result<Estimate> {
        if (self.code.k1 < 64 && msg.i0 >> self.code.k1 != 0) || (self.code.k2 < 64 && msg.j0 >> self.code.k2 != 0) {
            return Err(Error::InvalidParameter(format!(
                "message ({}, {}) outside bin ranges 2^{} x 2^{}",
                msg.i0, msg.j0, self.code.k1, self.code.k2
            )));
        }
        let set = self.candidates(msg);
        Ok(Estimate {
            decoded_z: (set.zs.len() == 1).then(|| self.z_digits(set.zs[0])),
            candidate_count: set.zs.len(),
        })
    }

    /// Whether a spurious `z != true_z` arises from `x_row` (or every x-bin member
    /// when `None`) paired with `y_row` (likewise).
    fn spurious_via(&self, rows_x: Range<usize>, rows_y: Range<usize>, true_z: u128) -> bool {
        rows_x.into_iter().any(|xr| {
            rows_y.clone().any(|yr| {
                if self.options.full_z {
                    self.typical_zs(xr, yr).into_iter().any(|z| z != true_z)
                } else {
                    self.pair_typical(xr, yr) && self.z_key(xr, yr) != true_z
                }
            })
        })
    }

    /// Encodes `pair`, decodes, and classifies the result against the truth.
    pub fn run(&self, pair: &SequencePair) -> Result<DecodeOutcome> {
        let message = self.code.encode(pair)?;
        let z_true = self.f.apply(pair);
        let zs = self.f.z_size();
        let true_key = z_true.iter().fold(0u128, |acc, &z| acc * zs as u128 + z as u128);
        let truth_typical = self.test.check(&[&z_true, &pair.xs, &pair.ys], &self.params)?;

        let set = self.candidates(message);
        let x_true = radix_value(&pair.xs, self.code.x_size).and_then(|r| self.x_side.row_of(message.i0, r));
        let y_true = radix_value(&pair.ys, self.code.y_size).and_then(|r| self.y_side.row_of(message.j0, r));
        let events = EventFlags {
            e0: set.zs.is_empty(),
            e1: y_true.is_some_and(|yr| self.spurious_via(self.x_side.range(message.i0), yr..yr + 1, true_key)),
            e2: x_true.is_some_and(|xr| self.spurious_via(xr..xr + 1, self.y_side.range(message.j0), true_key)),
            e12: set.zs.iter().any(|&z| z != true_key),
        };
        let success = set.zs.as_slice() == [true_key];
        Ok(DecodeOutcome {
            message,
            verdict: if success { Verdict::Success } else { Verdict::Error },
            error_class: if success { ErrorClass::None } else { classify_error(&events)? },
            decoded_z: (set.zs.len() == 1).then(|| self.z_digits(set.zs[0])),
            candidate_count: set.zs.len(),
            events,
            truth_typical,
        })
    }

    /// Exact block error probability of this code: the pmf-weighted fraction
    /// of all source outcomes that decode incorrectly.
    pub fn exact_error_probability(&self, src: &JointSource) -> Result<f64> {
        let n = self.code.n;
        let all = |alphabet: usize| -> Vec<Vec<usize>> {
            let total = alphabet.pow(n as u32);
            (0..total)
                .map(|mut v| {
                    let mut s = vec![0; n];
                    for d in s.iter_mut().rev() {
                        *d = v % alphabet;
                        v /= alphabet;
                    }
                    s
                })
                .collect()
        };
        let (xs_all, ys_all) = (all(src.x_size()), all(src.y_size()));
        let x_bins: Vec<u64> = xs_all.iter().map(|x| self.code.encode_x(x)).collect::<Result<_>>()?;
        let y_bins: Vec<u64> = ys_all.iter().map(|y| self.code.encode_y(y)).collect::<Result<_>>()?;
        let zs = self.f.z_size() as u128;
        let mut pe = 0.0;
        for (xi, x) in xs_all.iter().enumerate() {
            for (yi, y) in ys_all.iter().enumerate() {
                let p: f64 = x.iter().zip(y).map(|(&a, &b)| src.p(a, b)).product();
                if p == 0.0 {
                    continue;
                }
                let key = x.iter().zip(y).fold(0u128, |acc, (&a, &b)| acc * zs + self.f.eval(a, b) as u128);
                let set = self.candidates(EncodedMessage { i0: x_bins[xi], j0: y_bins[yi] });
                if set.zs.as_slice() != [key] {
                    pe += p;
                }
            }
        }
        // the summed products can overshoot 1 by a few ulps
        Ok(pe.min(1.0))
    }
}

/// One-shot decode against a known source pair.
pub fn decode(
    code: &BinningCode,
    pair: &SequencePair,
    src: &JointSource,
    f: &FunctionSpec,
    params: TypicalityParams,
    options: DecoderOptions,
) -> Result<DecodeOutcome> {
    Decoder::new(code, src, f, params, options)?.run(pair)
}
