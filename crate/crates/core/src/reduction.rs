//! A data compressor built from an arbitrary predictor.
//!
//! For `y` of length `m`, the first `m` objects of `X_t` (`t = ⌈log₂ m⌉`) are
//! labelled by `y`. If some ordered tuple of `n = ⌈√m⌉` distinct objects
//! trains the predictor to err on at most `⌊εm⌋` of them, `y` is replaced by
//! the tuple's permutation rank, `m` and a five-letter transcript `K` of the
//! positions where the prediction is wrong or the object was trained on.
//! Otherwise `y` is stored verbatim behind a `0` bit.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitcore::{
    ceil_log2, ceil_sqrt, factorial, first_m_strings, gamma_encode, gamma_encode_big, gamma_len, perm_rank,
    perm_unrank, BitReader, BitString, Permutation,
};
use crate::predictors::{predictor_by_name, LabeledSample, Predictor};
use crate::{Error, Result, Scalar};

/// Sizes derived from `m = |y|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleGrid {
    pub m: usize,
    pub t: usize,
    pub n: usize,
    /// The first `m` strings of `X_t`.
    pub xs: Vec<BitString>,
}

impl SampleGrid {
    pub fn for_len(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain(format!("sample grid needs m >= 2, got {m}")));
        }
        let t = ceil_log2(m as u64) as usize;
        let n = ceil_sqrt(m as u64) as usize;
        Ok(Self { m, t, n, xs: first_m_strings(t, m)? })
    }
}

pub fn build_sample_grid(y: &BitString) -> Result<SampleGrid> {
    SampleGrid::for_len(y.len())
}

/// One letter of the transcript `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KSymbol {
    /// Predicted correctly.
    Star,
    /// Mispredicted; carries the true label.
    Error(bool),
    /// Part of the training tuple; carries its label.
    Train(bool),
}

impl KSymbol {
    fn code(self) -> &'static str {
        match self {
            KSymbol::Star => "1000",
            KSymbol::Error(false) => "1001",
            KSymbol::Error(true) => "1010",
            KSymbol::Train(false) => "1011",
            KSymbol::Train(true) => "1100",
        }
    }

    fn from_code(low: [bool; 3]) -> Option<Self> {
        Some(match low {
            [false, false, false] => KSymbol::Star,
            [false, false, true] => KSymbol::Error(false),
            [false, true, false] => KSymbol::Error(true),
            [false, true, true] => KSymbol::Train(false),
            [true, false, false] => KSymbol::Train(true),
            _ => return None,
        })
    }
}

impl fmt::Display for KSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KSymbol::Star => f.write_str("*"),
            KSymbol::Error(b) => write!(f, "e{}", *b as u8),
            KSymbol::Train(b) => write!(f, "c{}", *b as u8),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KString(pub Vec<KSymbol>);

impl KString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[KSymbol] {
        &self.0
    }

    pub fn train_count(&self) -> usize {
        self.0.iter().filter(|s| matches!(s, KSymbol::Train(_))).count()
    }

    pub fn error_count(&self) -> usize {
        self.0.iter().filter(|s| matches!(s, KSymbol::Error(_))).count()
    }
}

impl fmt::Display for KString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Serialize for KString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// How candidate training tuples are visited.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TupleSearch {
    /// Every ordered distinct tuple, in lexicographic order.
    Exhaustive,
    /// The first `limit` tuples in lexicographic order.
    Capped(u64),
    /// `count` random tuples, examined in lexicographic order.
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressorConfig {
    pub epsilon: Ratio<u64>,
    pub search: TupleSearch,
}

impl Default for CompressorConfig {
    fn default() -> Self {
        Self { epsilon: Ratio::new(1, 20), search: TupleSearch::Exhaustive }
    }
}

impl CompressorConfig {
    pub fn validate(&self) -> Result<()> {
        let e = self.epsilon;
        if *e.numer() == 0 || e >= Ratio::from_integer(1) {
            return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {e}")));
        }
        Ok(())
    }

    /// Error budget `⌊εm⌋`.
    pub fn budget(&self, m: usize) -> usize {
        (self.epsilon * Ratio::from_integer(m as u64)).to_integer() as usize
    }
}

/// `E`: indices `i < m` where the predictor trained on `tuple` (indices into
/// the grid, labelled by `y`) mispredicts `y_i`.
pub fn error_set(phi: &dyn Predictor, y: &BitString, tuple: &[usize]) -> Result<Vec<usize>> {
    let grid = build_sample_grid(y)?;
    check_tuple(&grid, tuple)?;
    let mut sample = LabeledSample::empty(grid.t);
    Ok(errors_within(phi, &grid, y, tuple, &mut sample, usize::MAX)?.expect("unbounded budget"))
}

fn check_tuple(grid: &SampleGrid, tuple: &[usize]) -> Result<()> {
    let mut seen = vec![false; grid.m];
    for &i in tuple {
        if i >= grid.m || std::mem::replace(&mut seen[i], true) {
            return Err(Error::Domain(format!("tuple {tuple:?} is not distinct within 0..{}", grid.m)));
        }
    }
    Ok(())
}

/// Error set, or `None` as soon as it grows past `budget`.
fn errors_within(
    phi: &dyn Predictor,
    grid: &SampleGrid,
    y: &BitString,
    tuple: &[usize],
    sample: &mut LabeledSample,
    budget: usize,
) -> Result<Option<Vec<usize>>> {
    let pairs = sample.pairs_mut();
    pairs.resize_with(tuple.len(), Default::default);
    for (slot, &i) in pairs.iter_mut().zip(tuple) {
        slot.0.clone_from(&grid.xs[i]);
        slot.1 = y.bits()[i];
    }
    let predict = phi.fitted(sample)?;
    let mut errors = Vec::new();
    for (i, x) in grid.xs.iter().enumerate() {
        if predict(x)? != y.bits()[i] {
            errors.push(i);
            if errors.len() > budget {
                return Ok(None);
            }
        }
    }
    Ok(Some(errors))
}

/// Ordered tuples of distinct indices from `0..m`, in lexicographic order,
/// with the first `frozen` entries held fixed.
struct DistinctTuples {
    m: usize,
    frozen: usize,
    cur: Vec<usize>,
    used: Vec<bool>,
    started: bool,
}

impl DistinctTuples {
    fn new(m: usize, prefix: &[usize], n: usize) -> Option<Self> {
        if n > m {
            return None;
        }
        let mut used = vec![false; m];
        for &p in prefix {
            used[p] = true;
        }
        let mut s = Self { m, frozen: prefix.len(), cur: prefix.to_vec(), used, started: false };
        s.fill_from(prefix.len(), n);
        Some(s)
    }

    fn fill_from(&mut self, from: usize, n: usize) {
        self.cur.truncate(from);
        let mut v = 0;
        while self.cur.len() < n {
            while self.used[v] {
                v += 1;
            }
            self.used[v] = true;
            self.cur.push(v);
        }
    }

    fn next(&mut self) -> Option<&[usize]> {
        if !self.started {
            self.started = true;
            return Some(&self.cur);
        }
        let n = self.cur.len();
        let mut j = n;
        while j > self.frozen {
            j -= 1;
            let v = self.cur[j];
            self.used[v] = false;
            if let Some(w) = (v + 1..self.m).find(|&w| !self.used[w]) {
                self.cur[j] = w;
                self.used[w] = true;
                self.fill_from(j + 1, n);
                return Some(&self.cur);
            }
        }
        None
    }
}

/// A training tuple meeting the error budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodTuple {
    pub tuple: Vec<usize>,
    pub errors: Vec<usize>,
}

/// First tuple (in lexicographic order, within the search mode) whose error
/// set has at most `⌊εm⌋` elements.
pub fn find_good_tuple(phi: &dyn Predictor, y: &BitString, config: &CompressorConfig) -> Result<Option<GoodTuple>> {
    config.validate()?;
    let grid = build_sample_grid(y)?;
    search_grid(phi, &grid, y, config)
}

fn search_grid(
    phi: &dyn Predictor,
    grid: &SampleGrid,
    y: &BitString,
    config: &CompressorConfig,
) -> Result<Option<GoodTuple>> {
    let budget = config.budget(grid.m);
    let n = grid.n;
    let scan = |prefix: &[usize], limit: u64| -> Result<Option<GoodTuple>> {
        let mut sample = LabeledSample::empty(grid.t);
        let Some(mut it) = DistinctTuples::new(grid.m, prefix, n) else {
            return Ok(None);
        };
        let mut visited = 0;
        while visited < limit {
            let Some(tuple) = it.next() else { break };
            visited += 1;
            if let Some(errors) = errors_within(phi, grid, y, tuple, &mut sample, budget)? {
                return Ok(Some(GoodTuple { tuple: tuple.to_vec(), errors }));
            }
        }
        Ok(None)
    };
    match &config.search {
        TupleSearch::Exhaustive => (0..grid.m)
            .into_par_iter()
            .map(|first| scan(&[first], u64::MAX).transpose())
            .find_map_first(|hit| hit)
            .transpose(),
        TupleSearch::Capped(limit) => scan(&[], *limit),
        TupleSearch::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut tuples: Vec<Vec<usize>> =
                (0..*count).map(|_| sample_indices(&mut rng, grid.m, n).into_vec()).collect();
            tuples.sort();
            tuples.dedup();
            let mut sample = LabeledSample::empty(grid.t);
            for tuple in tuples {
                if let Some(errors) = errors_within(phi, grid, y, &tuple, &mut sample, budget)? {
                    return Ok(Some(GoodTuple { tuple, errors }));
                }
            }
            Ok(None)
        }
    }
}

/// The transcript: `c_{y_i}` on tuple entries, `e_{y_i}` on other errors and
/// `*` elsewhere.
pub fn build_kstring(y: &BitString, tuple: &[usize], errors: &[usize]) -> KString {
    let mut k = vec![KSymbol::Star; y.len()];
    for &i in errors {
        k[i] = KSymbol::Error(y.bits()[i]);
    }
    for &i in tuple {
        k[i] = KSymbol::Train(y.bits()[i]);
    }
    KString(k)
}

/// Greedy left-to-right: `**` becomes `0`, every other letter its 4-bit code.
pub fn sigma_encode(k: &KString) -> BitString {
    let s = k.symbols();
    let mut out = BitString::with_capacity(4 * s.len());
    let mut i = 0;
    while i < s.len() {
        if s[i] == KSymbol::Star && s.get(i + 1) == Some(&KSymbol::Star) {
            out.push(false);
            i += 2;
        } else {
            out.push_str(s[i].code());
            i += 1;
        }
    }
    out
}

/// Inverse of [`sigma_encode`] for a transcript of `m` letters. Non-canonical
/// streams (two lone stars in a row) are rejected.
pub fn sigma_decode(bits: &BitString, m: usize) -> Result<KString> {
    let mut r = BitReader::new(bits.bits());
    let k = read_sigma(bits.bits(), &mut r, m)?;
    if !r.is_exhausted() {
        return Err(Error::Malformed(format!("{} trailing bits after transcript", r.remaining())));
    }
    Ok(k)
}

fn read_sigma(all: &[bool], r: &mut BitReader<'_>, m: usize) -> Result<KString> {
    let start = r.position();
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        if !r.read_bit()? {
            if out.len() + 2 > m {
                return Err(Error::Malformed("star pair overruns the transcript length".into()));
            }
            out.extend([KSymbol::Star; 2]);
            continue;
        }
        let low = [r.read_bit()?, r.read_bit()?, r.read_bit()?];
        out.push(KSymbol::from_code(low).ok_or_else(|| Error::Malformed("unknown letter code".into()))?);
    }
    let k = KString(out);
    if sigma_encode(&k).bits() != &all[start..r.position()] {
        return Err(Error::Malformed("transcript is not in canonical form".into()));
    }
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Raw,
    Coded,
}

/// Everything about a coded-branch output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodedParts {
    pub m: usize,
    pub n: usize,
    pub tuple: Vec<usize>,
    pub errors: Vec<usize>,
    pub kstring: KString,
    pub rho_len: usize,
    pub s_len: usize,
    pub sigma_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Compressed {
    #[serde(serialize_with = "crate::machine::complexity::ser_display")]
    pub bits: BitString,
    pub branch: Branch,
    pub coded: Option<CodedParts>,
}

impl Compressed {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

fn raw(y: &BitString) -> Compressed {
    let mut bits = BitString::with_capacity(y.len() + 1);
    bits.push(false);
    bits.extend_from(y);
    Compressed { bits, branch: Branch::Raw, coded: None }
}

/// `ψ(y)`: `1 ρ s σ(K)` if a good tuple exists, else `0 y`.
pub fn compress(phi: &dyn Predictor, y: &BitString, config: &CompressorConfig) -> Result<Compressed> {
    config.validate()?;
    if y.len() < 4 {
        return Ok(raw(y));
    }
    let grid = build_sample_grid(y)?;
    let Some(GoodTuple { tuple, errors }) = search_grid(phi, &grid, y, config)? else {
        return Ok(raw(y));
    };

    let mut sorted = tuple.clone();
    sorted.sort_unstable();
    let order: Vec<usize> = tuple.iter().map(|v| sorted.binary_search(v).expect("entry of its own set")).collect();
    let rank = perm_rank(&Permutation::new(order)?);
    let rho = gamma_encode_big(&(rank + 1u32))?;
    let s = gamma_encode(grid.m as u64)?;
    let kstring = build_kstring(y, &tuple, &errors);
    let sigma = sigma_encode(&kstring);

    let mut bits = BitString::with_capacity(1 + rho.len() + s.len() + sigma.len());
    bits.push(true);
    bits.extend_from(&rho);
    bits.extend_from(&s);
    bits.extend_from(&sigma);
    Ok(Compressed {
        bits,
        branch: Branch::Coded,
        coded: Some(CodedParts {
            m: grid.m,
            n: grid.n,
            tuple,
            errors,
            kstring,
            rho_len: rho.len(),
            s_len: s.len(),
            sigma_len: sigma.len(),
        }),
    })
}

/// Inverse of [`compress`] for the same predictor.
pub fn decompress(phi: &dyn Predictor, bits: &BitString) -> Result<BitString> {
    let mut r = BitReader::new(bits.bits());
    if !r.read_bit()? {
        return Ok(r.rest());
    }
    let rank = r.read_gamma_big()? - 1u32;
    let m = r.read_gamma()? as usize;
    if m < 4 {
        return Err(Error::Malformed(format!("coded branch with m = {m} < 4")));
    }
    let grid = SampleGrid::for_len(m)?;
    if rank >= factorial(grid.n) {
        return Err(Error::Malformed(format!("permutation rank {rank} out of range for n = {}", grid.n)));
    }
    let k = read_sigma(bits.bits(), &mut r, m)?;
    if !r.is_exhausted() {
        return Err(Error::Malformed(format!("{} trailing bits after transcript", r.remaining())));
    }

    let sorted: Vec<usize> = (0..m).filter(|&i| matches!(k.0[i], KSymbol::Train(_))).collect();
    if sorted.len() != grid.n {
        return Err(Error::Malformed(format!("transcript has {} training letters, expected {}", sorted.len(), grid.n)));
    }
    let perm = perm_unrank(&rank, grid.n)?;
    let label = |i: usize| matches!(k.0[i], KSymbol::Train(true));
    let pairs = perm.as_slice().iter().map(|&j| (grid.xs[sorted[j]].clone(), label(sorted[j]))).collect();
    let sample = LabeledSample::new(grid.t, pairs)?;
    let predict = phi.fitted(&sample)?;
    k.0.iter()
        .enumerate()
        .map(|(i, sym)| match sym {
            KSymbol::Train(b) | KSymbol::Error(b) => Ok(*b),
            KSymbol::Star => predict(&grid.xs[i]),
        })
        .collect()
}

/// Both sides of `|σ(K)| ≤ ½m + 7(εm + n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eq2Check<S> {
    pub sigma_len: usize,
    pub bound: S,
    pub holds: bool,
}

pub fn eq2_check<S: Scalar>(k: &KString, n: usize, epsilon: &S) -> Eq2Check<S> {
    let m = k.len();
    let sigma_len = sigma_encode(k).len();
    let bound = S::from_ratio(m as u64, 2) + S::from_u64(7) * (epsilon.clone() * S::from_usize(m) + S::from_usize(n));
    let holds = S::from_usize(sigma_len) <= bound;
    Eq2Check { sigma_len, bound, holds }
}

/// The bound the greedy code actually satisfies: with `j` non-star letters,
/// there are at most `j + 1` star runs and each odd run wastes 3.5 bits
/// beyond `½` per star.
pub fn sigma_len_upper_bound(m: usize, non_stars: usize) -> Ratio<u64> {
    Ratio::new(m as u64, 2) + Ratio::from_integer(7 * non_stars as u64) + Ratio::new(7, 2)
}

/// Which strings [`compressibility_stats`] processes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatsSource {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
    Explicit(Vec<BitString>),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CompressibilityStats {
    pub m: usize,
    pub processed: u64,
    pub coded_count: u64,
    pub raw_count: u64,
    /// Outputs strictly shorter than the input.
    pub shorter_count: u64,
    pub eq2_violations: u64,
    /// Output length → number of strings.
    pub length_histogram: BTreeMap<usize, u64>,
}

impl CompressibilityStats {
    fn record(&mut self, c: &Compressed, epsilon: Ratio<u64>) {
        self.processed += 1;
        *self.length_histogram.entry(c.len()).or_default() += 1;
        if c.len() < self.m {
            self.shorter_count += 1;
        }
        match &c.coded {
            None => self.raw_count += 1,
            Some(parts) => {
                self.coded_count += 1;
                let eps = Ratio::new(*epsilon.numer() as i64, *epsilon.denom() as i64);
                if !eq2_check(&parts.kstring, parts.n, &eps).holds {
                    self.eq2_violations += 1;
                }
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.processed += other.processed;
        self.coded_count += other.coded_count;
        self.raw_count += other.raw_count;
        self.shorter_count += other.shorter_count;
        self.eq2_violations += other.eq2_violations;
        for (k, v) in other.length_histogram {
            *self.length_histogram.entry(k).or_default() += v;
        }
        self
    }
}

/// Branch outcomes and output lengths of [`compress`] over strings of length `m`.
pub fn compressibility_stats(
    phi: &dyn Predictor,
    m: usize,
    config: &CompressorConfig,
    source: &StatsSource,
) -> Result<CompressibilityStats> {
    let ys: Vec<BitString> = match source {
        StatsSource::Exhaustive => {
            if m > 24 {
                return Err(Error::CapExceeded { cap: 24 });
            }
            (0..1u64 << m).map(|v| BitString::from_uint(v, m)).collect()
        }
        StatsSource::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*count).map(|_| (0..m).map(|_| rng.gen::<bool>()).collect()).collect()
        }
        StatsSource::Explicit(ys) => {
            if let Some(y) = ys.iter().find(|y| y.len() != m) {
                return Err(Error::WrongLength { expected: m, got: y.len() });
            }
            ys.clone()
        }
    };
    let empty = || CompressibilityStats { m, ..Default::default() };
    ys.par_iter()
        .map(|y| {
            let c = compress(phi, y, config)?;
            let mut s = empty();
            s.record(&c, config.epsilon);
            Ok(s)
        })
        .try_reduce(empty, |a, b| Ok(a.merge(b)))
}

/// A total injective map on binary strings with its inverse.
pub trait Compressor: Send + Sync {
    fn name(&self) -> &str;
    fn compress(&self, x: &BitString) -> Result<BitString>;
    fn decompress(&self, bits: &BitString) -> Result<BitString>;
}

/// `x ↦ 0x`; never shortens anything.
#[derive(Debug, Clone, Copy, Default)]
pub struct PrependBit;

impl Compressor for PrependBit {
    fn name(&self) -> &str {
        "prepend-bit"
    }

    fn compress(&self, x: &BitString) -> Result<BitString> {
        Ok(raw(x).bits)
    }

    fn decompress(&self, bits: &BitString) -> Result<BitString> {
        match bits.get(0) {
            Some(false) => Ok(bits.bits()[1..].iter().copied().collect()),
            _ => Err(Error::Malformed("expected a leading 0".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl Compressor for Identity {
    fn name(&self) -> &str {
        "identity"
    }

    fn compress(&self, x: &BitString) -> Result<BitString> {
        Ok(x.clone())
    }

    fn decompress(&self, bits: &BitString) -> Result<BitString> {
        Ok(bits.clone())
    }
}

/// Nonempty all-zero strings become `1 γ(|x|)`, everything else `0 x`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroRun;

impl Compressor for ZeroRun {
    fn name(&self) -> &str {
        "zero-run"
    }

    fn compress(&self, x: &BitString) -> Result<BitString> {
        if x.is_empty() || x.count_ones() > 0 {
            return Ok(raw(x).bits);
        }
        let mut out = BitString::with_capacity(1 + gamma_len(x.len() as u64));
        out.push(true);
        out.extend_from(&gamma_encode(x.len() as u64)?);
        Ok(out)
    }

    fn decompress(&self, bits: &BitString) -> Result<BitString> {
        let mut r = BitReader::new(bits.bits());
        if !r.read_bit()? {
            return Ok(r.rest());
        }
        let len = r.read_gamma()? as usize;
        if !r.is_exhausted() {
            return Err(Error::Malformed("trailing bits after run length".into()));
        }
        Ok(BitString::repeat(false, len))
    }
}

/// [`compress`] / [`decompress`] behind the [`Compressor`] interface.
pub struct PredictorCompressor {
    name: String,
    predictor: Arc<dyn Predictor>,
    config: CompressorConfig,
}

impl PredictorCompressor {
    pub fn new(predictor: Arc<dyn Predictor>, config: CompressorConfig) -> Self {
        Self { name: format!("reduction:{}", predictor.name()), predictor, config }
    }
}

impl Compressor for PredictorCompressor {
    fn name(&self) -> &str {
        &self.name
    }

    fn compress(&self, x: &BitString) -> Result<BitString> {
        Ok(compress(self.predictor.as_ref(), x, &self.config)?.bits)
    }

    fn decompress(&self, bits: &BitString) -> Result<BitString> {
        decompress(self.predictor.as_ref(), bits)
    }
}

/// `prepend-bit`, `identity`, `zero-run`, or `reduction:<predictor>`.
pub fn compressor_by_name(name: &str, erm_cap: u64, config: &CompressorConfig) -> Result<Arc<dyn Compressor>> {
    Ok(match name {
        "prepend-bit" => Arc::new(PrependBit),
        "identity" => Arc::new(Identity),
        "zero-run" => Arc::new(ZeroRun),
        _ => match name.strip_prefix("reduction:") {
            Some(p) => Arc::new(PredictorCompressor::new(predictor_by_name(p, erm_cap)?, config.clone())),
            None => return Err(Error::UnknownName { kind: "compressor", name: name.to_owned() }),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predictors::{Pointwise, PrefixNearestNeighbour, ShortestConsistentProgram};
    use std::collections::HashSet;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn all_up_to(max: usize) -> impl Iterator<Item = BitString> {
        (0..=max).flat_map(|len| (0..1u64 << len).map(move |v| BitString::from_uint(v, len)))
    }

    /// Predicts 0 everywhere, ignoring the sample.
    struct Contrarian;
    impl Predictor for Contrarian {
        fn name(&self) -> &str {
            "contrarian"
        }
        fn predict(&self, _: &LabeledSample, _: &BitString) -> Result<bool> {
            Ok(false)
        }
    }

    #[test]
    fn grid_examples() {
        let g = SampleGrid::for_len(16).unwrap();
        assert_eq!((g.m, g.t, g.n), (16, 4, 4));
        assert_eq!(g.xs.len(), 16);
        let g = SampleGrid::for_len(5).unwrap();
        assert_eq!((g.m, g.t, g.n), (5, 3, 3));
        assert_eq!(g.xs.last().unwrap().to_string(), "100");
        let g = SampleGrid::for_len(2).unwrap();
        assert_eq!((g.m, g.t, g.n), (2, 1, 2));
        assert!(SampleGrid::for_len(1).is_err());
    }

    #[test]
    fn distinct_tuples_in_lex_order() {
        let mut it = DistinctTuples::new(5, &[], 3).unwrap();
        let mut all = vec![];
        while let Some(t) = it.next() {
            all.push(t.to_vec());
        }
        let mut oracle = vec![];
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    if a != b && b != c && a != c {
                        oracle.push(vec![a, b, c]);
                    }
                }
            }
        }
        assert_eq!(all, oracle);
        let mut it = DistinctTuples::new(4, &[2], 2).unwrap();
        let mut with_prefix = vec![];
        while let Some(t) = it.next() {
            with_prefix.push(t.to_vec());
        }
        assert_eq!(with_prefix, vec![vec![2, 0], vec![2, 1], vec![2, 3]]);
    }

    #[test]
    fn error_set_examples() {
        let zeros = BitString::repeat(false, 16);
        let ones = BitString::repeat(true, 16);
        assert!(error_set(&Pointwise, &zeros, &[3, 1, 4, 5]).unwrap().is_empty());
        assert_eq!(error_set(&Pointwise, &ones, &[3, 1, 4, 5]).unwrap().len(), 12);
        assert_eq!(error_set(&Contrarian, &ones, &[3, 1, 4, 5]).unwrap().len(), 16);
        assert!(error_set(&Pointwise, &ones, &[1, 1, 2, 3]).is_err());
    }

    #[test]
    fn good_tuple_examples() {
        let cfg = CompressorConfig::default();
        let hit = find_good_tuple(&Pointwise, &BitString::repeat(false, 16), &cfg).unwrap().unwrap();
        assert_eq!(hit.tuple, vec![0, 1, 2, 3]);
        assert!(hit.errors.is_empty());
        assert_eq!(find_good_tuple(&Pointwise, &BitString::repeat(true, 16), &cfg).unwrap(), None);
        let capped = CompressorConfig { search: TupleSearch::Capped(0), ..cfg };
        assert_eq!(find_good_tuple(&Pointwise, &BitString::repeat(false, 16), &capped).unwrap(), None);
    }

    #[test]
    fn exhaustive_search_returns_the_lexicographically_first_hit() {
        let cfg = CompressorConfig { epsilon: Ratio::new(1, 4), ..Default::default() };
        let sequential = CompressorConfig { search: TupleSearch::Capped(u64::MAX), ..cfg.clone() };
        for y in all_up_to(9).filter(|y| y.len() >= 4) {
            for phi in [&Pointwise as &dyn Predictor, &PrefixNearestNeighbour] {
                assert_eq!(find_good_tuple(phi, &y, &cfg).unwrap(), find_good_tuple(phi, &y, &sequential).unwrap());
            }
        }
    }

    #[test]
    fn kstring_examples() {
        let k = build_kstring(&BitString::repeat(false, 16), &[0, 1, 2, 3], &[]);
        assert_eq!(k.to_string(), format!("c0 c0 c0 c0{}", " *".repeat(12)));
        assert_eq!(k.train_count(), 4);
        let k = build_kstring(&bs("0110"), &[1], &[1, 2]);
        assert_eq!(k.symbols(), &[KSymbol::Star, KSymbol::Train(true), KSymbol::Error(true), KSymbol::Star]);
    }

    #[test]
    fn sigma_examples() {
        use KSymbol::*;
        let k = KString(vec![Star, Star, Train(true), Star, Error(false), Star, Star]);
        let bits = sigma_encode(&k);
        assert_eq!(bits.to_string(), "01100100010010");
        assert_eq!(bits.len(), 14);
        assert_eq!(sigma_decode(&bits, 7).unwrap(), k);
        assert_eq!(sigma_encode(&KString(vec![Star, Star])).to_string(), "0");
        assert_eq!(sigma_encode(&KString(vec![Train(false)])).to_string(), "1011");
        assert!(sigma_decode(&bs("0"), 1).is_err());
        assert!(sigma_decode(&bs("10001000"), 2).is_err());
        assert!(sigma_decode(&bs("1111"), 1).is_err());
        assert!(sigma_decode(&bs("00"), 2).is_err());
    }

    #[test]
    fn sigma_round_trips_every_small_transcript() {
        use KSymbol::*;
        let letters = [Star, Error(false), Error(true), Train(false), Train(true)];
        for m in 0..=6u32 {
            let mut seen = HashSet::new();
            for code in 0..5usize.pow(m) {
                let k = KString((0..m).map(|i| letters[code / 5usize.pow(i) % 5]).collect());
                let bits = sigma_encode(&k);
                assert_eq!(sigma_decode(&bits, m as usize).unwrap(), k);
                assert!(seen.insert(bits));
            }
        }
    }

    #[test]
    fn compress_examples() {
        let cfg = CompressorConfig::default();
        let ones = BitString::repeat(true, 16);
        let c = compress(&Pointwise, &ones, &cfg).unwrap();
        assert_eq!(c.branch, Branch::Raw);
        assert_eq!(c.bits.to_string(), format!("0{ones}"));

        let zeros = BitString::repeat(false, 16);
        let c = compress(&Pointwise, &zeros, &cfg).unwrap();
        let parts = c.coded.as_ref().unwrap();
        assert_eq!((parts.rho_len, parts.s_len, parts.sigma_len), (1, 9, 22));
        assert_eq!(c.len(), 33);
        assert_eq!(c.bits.to_string(), format!("11{}{}", "000010000", "1011".repeat(4) + "000000"));
        assert_eq!(decompress(&Pointwise, &c.bits).unwrap(), zeros);

        for y in ["0", "1", "", "011"] {
            assert_eq!(compress(&Pointwise, &bs(y), &cfg).unwrap().bits.to_string(), format!("0{y}"));
        }
    }

    #[test]
    fn decoder_rejects_malformed_containers() {
        let c = compress(&Pointwise, &BitString::repeat(false, 16), &CompressorConfig::default()).unwrap();
        let mut truncated = c.bits.bits().to_vec();
        truncated.pop();
        assert!(decompress(&Pointwise, &BitString::from_bits(truncated)).is_err());
        let mut extended = c.bits.clone();
        extended.push(false);
        assert!(decompress(&Pointwise, &extended).is_err());
        assert!(decompress(&Pointwise, &BitString::new()).is_err());
        // rank 4! = 24 for n = 4 is out of range
        let mut bad = bs("1");
        bad.extend_from(&gamma_encode(25).unwrap());
        bad.extend_from(&c.bits.bits()[2..].iter().copied().collect());
        assert!(matches!(decompress(&Pointwise, &bad), Err(Error::Malformed(_))));
    }

    fn check_round_trip(phi: &dyn Predictor, max_len: usize, eps: Ratio<u64>) {
        let cfg = CompressorConfig { epsilon: eps, ..Default::default() };
        let mut outputs = HashSet::new();
        for y in all_up_to(max_len) {
            let c = compress(phi, &y, &cfg).unwrap();
            assert_eq!(decompress(phi, &c.bits).unwrap(), y, "{} on {y}", phi.name());
            if let Some(p) = &c.coded {
                assert_eq!(p.kstring.train_count(), p.n);
                assert!(p.kstring.error_count() <= cfg.budget(p.m));
                assert_eq!(p.s_len, 2 * crate::bitcore::floor_log2(p.m as u64) as usize + 1);
            }
            assert!(outputs.insert(c.bits), "collision for {y}");
        }
    }

    #[test]
    fn round_trip_and_injective_small() {
        for eps in [Ratio::new(1, 20), Ratio::new(1, 3)] {
            check_round_trip(&Pointwise, 10, eps);
            check_round_trip(&PrefixNearestNeighbour, 10, eps);
        }
        check_round_trip(&ShortestConsistentProgram::default(), 8, Ratio::new(1, 4));
    }

    #[test]
    fn sampled_search_is_deterministic_and_decodable() {
        let cfg = CompressorConfig { epsilon: Ratio::new(1, 4), search: TupleSearch::Sampled { count: 30, seed: 7 } };
        for y in all_up_to(9).filter(|y| y.len() >= 4) {
            let a = compress(&PrefixNearestNeighbour, &y, &cfg).unwrap();
            assert_eq!(a, compress(&PrefixNearestNeighbour, &y, &cfg).unwrap());
            assert_eq!(decompress(&PrefixNearestNeighbour, &a.bits).unwrap(), y);
        }
    }

    #[test]
    fn eq2_examples() {
        let eps = Ratio::new(1i64, 20);
        let k = build_kstring(&BitString::repeat(false, 16), &[0, 1, 2, 3], &[]);
        let c = eq2_check(&k, 4, &eps);
        assert_eq!(c.sigma_len, 22);
        assert_eq!(c.bound, Ratio::new(416, 10));
        assert!(c.holds);
        let stars = KString(vec![KSymbol::Star; 16]);
        let c = eq2_check(&stars, 4, &0.05f64);
        assert_eq!(c.sigma_len, 8);
        assert!(c.holds);
    }

    /// Every transcript pattern of non-star positions for m <= 16: the greedy
    /// code always meets `½m + 7j + 3.5`, and that is tight.
    #[test]
    fn sigma_length_bound_is_tight() {
        for m in 1..=16usize {
            let mut worst = vec![0usize; m + 1];
            for mask in 0u32..1 << m {
                let k = KString(
                    (0..m).map(|i| if mask >> i & 1 == 1 { KSymbol::Train(false) } else { KSymbol::Star }).collect(),
                );
                let j = mask.count_ones() as usize;
                let len = sigma_encode(&k).len();
                assert!(Ratio::from_integer(len as u64) <= sigma_len_upper_bound(m, j));
                worst[j] = worst[j].max(len);
            }
            for (j, &w) in worst.iter().enumerate() {
                // odd runs everywhere: j + 1 runs of one star each when m = 2j + 1
                if m == 2 * j + 1 {
                    assert_eq!(Ratio::from_integer(w as u64), sigma_len_upper_bound(m, j));
                }
            }
        }
    }

    /// The stated bound `½m + 7(εm + n)` is not implied by the greedy code:
    /// for m = 9 the pointwise reduction meets a transcript that exceeds it.
    #[test]
    fn stated_bound_has_small_counterexamples() {
        let y = bs("010101000");
        let c = compress(&Pointwise, &y, &CompressorConfig::default()).unwrap();
        let parts = c.coded.unwrap();
        let check = eq2_check(&parts.kstring, parts.n, &Ratio::new(1i64, 20));
        assert!(!check.holds, "{check:?} for {}", parts.kstring);
        assert!(Ratio::from_integer(check.sigma_len as u64) <= sigma_len_upper_bound(9, parts.n + parts.errors.len()));
    }

    #[test]
    fn stats_are_consistent() {
        let cfg = CompressorConfig::default();
        let ys = vec![BitString::repeat(false, 16), BitString::repeat(true, 16)];
        let s = compressibility_stats(&Pointwise, 16, &cfg, &StatsSource::Explicit(ys)).unwrap();
        assert_eq!((s.coded_count, s.raw_count, s.processed), (1, 1, 2));
        let s = compressibility_stats(&Pointwise, 8, &cfg, &StatsSource::Exhaustive).unwrap();
        assert_eq!(s.processed, 256);
        assert_eq!(s.coded_count + s.raw_count, 256);
        assert_eq!(s.length_histogram.values().sum::<u64>(), 256);
        let src = StatsSource::Sampled { count: 40, seed: 3 };
        assert_eq!(
            compressibility_stats(&Pointwise, 12, &cfg, &src).unwrap(),
            compressibility_stats(&Pointwise, 12, &cfg, &src).unwrap()
        );
    }

    #[test]
    fn reference_compressors_round_trip() {
        let cfg = CompressorConfig::default();
        for name in ["prepend-bit", "identity", "zero-run", "reduction:pointwise"] {
            let c = compressor_by_name(name, 40, &cfg).unwrap();
            let mut seen = HashSet::new();
            for x in all_up_to(8) {
                let z = c.compress(&x).unwrap();
                assert_eq!(c.decompress(&z).unwrap(), x, "{name}");
                assert!(seen.insert(z));
            }
        }
        assert_eq!(ZeroRun.compress(&BitString::repeat(false, 16)).unwrap().len(), 10);
        assert!(compressor_by_name("gzip", 40, &cfg).is_err());
    }
}
