//! Correlated source pairs, target functions and i.i.d. sampling.
//!
//! Alphabets are dense indices `0..k`. Symbol names, when present, are only
//! carried along for display. Tables are row-major with the x symbol
//! indexing rows.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stream::Stream;

/// Tolerance on the total mass of a pmf.
pub const PMF_TOLERANCE: f64 = 1e-9;

/// Joint pmf of a pair `(X, Y)` over finite alphabets.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSource {
    x_size: usize,
    y_size: usize,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
    x_names: Option<Vec<String>>,
    y_names: Option<Vec<String>>,
}

impl JointSource {
    /// Builds a source from a row-major `x_size * y_size` table.
    pub fn new(x_size: usize, y_size: usize, pmf: Vec<f64>) -> Result<Self> {
        if x_size == 0 || y_size == 0 {
            return Err(Error::InvalidParameter("alphabet sizes must be at least 1".into()));
        }
        if pmf.len() != x_size * y_size {
            return Err(Error::NonRectangular(format!(
                "expected {} entries for a {x_size}x{y_size} pmf, found {}",
                x_size * y_size,
                pmf.len()
            )));
        }
        for (i, &p) in pmf.iter().enumerate() {
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::InvalidProbability { x: i / y_size, y: i % y_size, value: p });
            }
        }
        let sum: f64 = pmf.iter().sum();
        if (sum - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        let cdf = pmf
            .iter()
            .scan(0.0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        Ok(JointSource { x_size, y_size, pmf, cdf, x_names: None, y_names: None })
    }

    /// Builds a source from one row per x symbol.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let y_size = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != y_size) {
            return Err(Error::NonRectangular(format!(
                "pmf row {bad} has {} entries, row 0 has {y_size}",
                rows[bad].len()
            )));
        }
        Self::new(rows.len(), y_size, rows.concat())
    }

    /// Doubly symmetric binary source: X uniform, Y = X xor N, N ~ Bernoulli(p).
    pub fn dsbs(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("crossover probability {p} not in [0, 1]")));
        }
        Self::new(2, 2, vec![(1.0 - p) / 2.0, p / 2.0, p / 2.0, (1.0 - p) / 2.0])
    }

    pub fn uniform(x_size: usize, y_size: usize) -> Result<Self> {
        let cells = x_size * y_size;
        Self::new(x_size, y_size, vec![1.0 / cells as f64; cells])
    }

    pub fn with_names(mut self, x_names: Vec<String>, y_names: Vec<String>) -> Result<Self> {
        if x_names.len() != self.x_size || y_names.len() != self.y_size {
            return Err(Error::DimensionMismatch("symbol name lists do not match alphabet sizes".into()));
        }
        self.x_names = Some(x_names);
        self.y_names = Some(y_names);
        Ok(self)
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    /// Row-major joint table.
    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn p(&self, x: usize, y: usize) -> f64 {
        self.pmf[x * self.y_size + y]
    }

    pub fn x_names(&self) -> Option<&[String]> {
        self.x_names.as_deref()
    }

    pub fn y_names(&self) -> Option<&[String]> {
        self.y_names.as_deref()
    }

    /// Marginal pmfs of X and Y.
    pub fn marginals(&self) -> (Vec<f64>, Vec<f64>) {
        let mut px = vec![0.0; self.x_size];
        let mut py = vec![0.0; self.y_size];
        for x in 0..self.x_size {
            for y in 0..self.y_size {
                let p = self.p(x, y);
                px[x] += p;
                py[y] += p;
            }
        }
        (px, py)
    }

    /// Draws `n` i.i.d. pairs by inverse-CDF lookup on the flattened table.
    pub fn sample(&self, n: usize, stream: &mut Stream) -> Result<SequencePair> {
        if n == 0 {
            return Err(Error::InvalidParameter("block length must be at least 1".into()));
        }
        let (mut xs, mut ys) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for _ in 0..n {
            let cell = self.draw_cell(stream.gen::<f64>());
            xs.push(cell / self.y_size);
            ys.push(cell % self.y_size);
        }
        Ok(SequencePair { xs, ys })
    }

    fn draw_cell(&self, u: f64) -> usize {
        let idx = self.cdf.partition_point(|&c| c <= u);
        if idx < self.pmf.len() {
            idx
        } else {
            // total mass may fall short of 1 by rounding
            self.pmf.iter().rposition(|&p| p > 0.0).unwrap_or(0)
        }
    }
}

/// Free-function form of [`JointSource::marginals`].
pub fn marginals(src: &JointSource) -> (Vec<f64>, Vec<f64>) {
    src.marginals()
}

/// A total function table `F: X x Y -> Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSpec {
    x_size: usize,
    y_size: usize,
    z_size: usize,
    table: Vec<usize>,
    z_names: Option<Vec<String>>,
}

impl FunctionSpec {
    pub fn new(x_size: usize, y_size: usize, z_size: usize, table: Vec<usize>) -> Result<Self> {
        if z_size == 0 {
            return Err(Error::InvalidParameter("z alphabet must have at least one symbol".into()));
        }
        if table.len() != x_size * y_size {
            return Err(Error::NonRectangular(format!(
                "function table has {} entries, expected {x_size}x{y_size}",
                table.len()
            )));
        }
        for (i, &z) in table.iter().enumerate() {
            if z >= z_size {
                return Err(Error::TableOutOfRange { x: i / y_size, y: i % y_size, value: z, z_size });
            }
        }
        Ok(FunctionSpec { x_size, y_size, z_size, table, z_names: None })
    }

    /// `F(x, y) = (x, y)` encoded as the product index `x * |Y| + y`.
    pub fn identity(x_size: usize, y_size: usize) -> Self {
        let table = (0..x_size * y_size).collect();
        FunctionSpec { x_size, y_size, z_size: x_size * y_size, table, z_names: None }
    }

    pub fn constant(x_size: usize, y_size: usize, z_size: usize, value: usize) -> Result<Self> {
        Self::new(x_size, y_size, z_size, vec![value; x_size * y_size])
    }

    /// `F(x, y) = (x + y) mod m` on `m x m` alphabets; `m = 2` is the mod-2 adder.
    pub fn modular_sum(m: usize) -> Self {
        let table = (0..m * m).map(|i| (i / m + i % m) % m).collect();
        FunctionSpec { x_size: m, y_size: m, z_size: m, table, z_names: None }
    }

    pub fn with_z_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.z_size {
            return Err(Error::DimensionMismatch("z name list does not match z alphabet size".into()));
        }
        self.z_names = Some(names);
        Ok(self)
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn z_size(&self) -> usize {
        self.z_size
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn z_names(&self) -> Option<&[String]> {
        self.z_names.as_deref()
    }

    #[inline]
    pub fn eval(&self, x: usize, y: usize) -> usize {
        self.table[x * self.y_size + y]
    }

    /// z symbols that no `(x, y)` maps to. Permitted, but worth reporting.
    pub fn unused_z_symbols(&self) -> Vec<usize> {
        let mut used = vec![false; self.z_size];
        for &z in &self.table {
            used[z] = true;
        }
        (0..self.z_size).filter(|&z| !used[z]).collect()
    }

    /// Componentwise `F` over a sequence pair.
    pub fn apply(&self, pair: &SequencePair) -> Vec<usize> {
        pair.xs.iter().zip(&pair.ys).map(|(&x, &y)| self.eval(x, y)).collect()
    }

    pub(crate) fn check_source(&self, src: &JointSource) -> Result<()> {
        if self.x_size != src.x_size() || self.y_size != src.y_size() {
            return Err(Error::DimensionMismatch(format!(
                "function is defined on {}x{}, source is {}x{}",
                self.x_size,
                self.y_size,
                src.x_size(),
                src.y_size()
            )));
        }
        Ok(())
    }
}

/// Free-function form of [`FunctionSpec::apply`].
pub fn apply_function(f: &FunctionSpec, pair: &SequencePair) -> Vec<usize> {
    f.apply(pair)
}

/// pmf of `Z = F(X, Y)`.
pub fn induced_z_pmf(src: &JointSource, f: &FunctionSpec) -> Result<Vec<f64>> {
    f.check_source(src)?;
    let mut pz = vec![0.0; f.z_size()];
    for (cell, &p) in src.pmf().iter().enumerate() {
        pz[f.table()[cell]] += p;
    }
    Ok(pz)
}

/// `n` realizations of the pair, stored as two index sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SequencePair {
    pub xs: Vec<usize>,
    pub ys: Vec<usize>,
}

impl SequencePair {
    /// Validates lengths and symbol ranges against the given alphabet sizes.
    pub fn new(xs: Vec<usize>, ys: Vec<usize>, x_size: usize, y_size: usize) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch { expected: xs.len(), found: ys.len() });
        }
        check_symbols(&xs, x_size)?;
        check_symbols(&ys, y_size)?;
        Ok(SequencePair { xs, ys })
    }

    pub fn n(&self) -> usize {
        self.xs.len()
    }

    /// Positions `range` of both sequences.
    pub fn slice(&self, range: std::ops::Range<usize>) -> SequencePair {
        SequencePair { xs: self.xs[range.clone()].to_vec(), ys: self.ys[range].to_vec() }
    }
}

pub(crate) fn check_symbols(seq: &[usize], size: usize) -> Result<()> {
    match seq.iter().position(|&s| s >= size) {
        Some(position) => Err(Error::SymbolOutOfRange { position, symbol: seq[position], size }),
        None => Ok(()),
    }
}

/// On-disk form of a source and function.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceDocument {
    pub x_alphabet: Vec<String>,
    pub y_alphabet: Vec<String>,
    pub pmf: Vec<Vec<f64>>,
    pub function: FunctionDocument,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDocument {
    pub z_alphabet: Vec<String>,
    pub table: Vec<Vec<SymbolRef>>,
}

/// A z table entry, either a dense index or a symbol name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolRef {
    Index(usize),
    Name(String),
}

impl SourceDocument {
    /// Validates the document and resolves symbol names to indices.
    pub fn resolve(&self) -> Result<(JointSource, FunctionSpec)> {
        let (xn, yn) = (self.x_alphabet.len(), self.y_alphabet.len());
        if xn == 0 || yn == 0 {
            return Err(Error::Malformed("x_alphabet and y_alphabet must be non-empty".into()));
        }
        if self.pmf.len() != xn {
            return Err(Error::NonRectangular(format!("pmf has {} rows, x_alphabet has {xn}", self.pmf.len())));
        }
        if let Some(r) = self.pmf.iter().position(|row| row.len() != yn) {
            return Err(Error::NonRectangular(format!(
                "pmf row {r} has {} entries, y_alphabet has {yn}",
                self.pmf[r].len()
            )));
        }
        let src = JointSource::from_rows(&self.pmf)?
            .with_names(self.x_alphabet.clone(), self.y_alphabet.clone())?;

        let table = &self.function.table;
        if table.len() != xn {
            return Err(Error::NonRectangular(format!("function table has {} rows, x_alphabet has {xn}", table.len())));
        }
        let z_alpha = &self.function.z_alphabet;
        let mut flat = Vec::with_capacity(xn * yn);
        for (x, row) in table.iter().enumerate() {
            if row.len() != yn {
                return Err(Error::NonRectangular(format!(
                    "function table row {x} has {} entries, y_alphabet has {yn}",
                    row.len()
                )));
            }
            for (y, entry) in row.iter().enumerate() {
                let z = match entry {
                    SymbolRef::Index(i) => *i,
                    SymbolRef::Name(name) => z_alpha.iter().position(|s| s == name).ok_or_else(|| {
                        Error::Malformed(format!("function table entry ({x}, {y}) names unknown z symbol {name:?}"))
                    })?,
                };
                flat.push(z);
            }
        }
        let f = FunctionSpec::new(xn, yn, z_alpha.len(), flat)?.with_z_names(z_alpha.clone())?;
        Ok((src, f))
    }

    /// Document form of a source and function, generating names `0..k` where absent.
    pub fn from_parts(src: &JointSource, f: &FunctionSpec) -> Result<Self> {
        f.check_source(src)?;
        let names = |given: Option<&[String]>, k: usize| {
            given.map_or_else(|| (0..k).map(|i| i.to_string()).collect(), <[String]>::to_vec)
        };
        Ok(SourceDocument {
            x_alphabet: names(src.x_names(), src.x_size()),
            y_alphabet: names(src.y_names(), src.y_size()),
            pmf: src.pmf().chunks(src.y_size()).map(<[f64]>::to_vec).collect(),
            function: FunctionDocument {
                z_alphabet: names(f.z_names(), f.z_size()),
                table: f
                    .table()
                    .chunks(f.y_size())
                    .map(|row| row.iter().map(|&z| SymbolRef::Index(z)).collect())
                    .collect(),
            },
        })
    }
}

/// Parses and validates a source/function JSON document.
pub fn load_source(document: &str) -> Result<(JointSource, FunctionSpec)> {
    let doc: SourceDocument =
        serde_json::from_str(document).map_err(|e| Error::Malformed(e.to_string()))?;
    doc.resolve()
}

pub fn load_source_file(path: impl AsRef<Path>) -> Result<(JointSource, FunctionSpec)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    load_source(&text)
}
