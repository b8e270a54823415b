//! Predictors: rules mapping a labelled sample and a query object to a label.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::bitcore::{all_strings, BitString};
use crate::machine::complexity::first_program_where;
use crate::machine::encoding::header_len;
use crate::machine::formula::{FunctionTable, LabellingProgram, MAX_MASK_VARS};
use crate::machine::{ProgramIndexer, Synthesizer};
use crate::{Error, Result};

/// Default program-length cap (bits) for the ERM predictor.
pub const DEFAULT_ERM_CAP: u64 = 48;

/// An ordered sample `x_1, y_1, ..., x_n, y_n` of objects from `X_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSample {
    t: usize,
    pairs: Vec<(BitString, bool)>,
}

impl LabeledSample {
    /// Validates lengths and that repeated objects carry the same label.
    pub fn new(t: usize, pairs: Vec<(BitString, bool)>) -> Result<Self> {
        let mut seen: HashMap<&BitString, bool> = HashMap::new();
        for (x, y) in &pairs {
            if x.len() != t {
                return Err(Error::WrongLength { expected: t, got: x.len() });
            }
            if let Some(prev) = seen.insert(x, *y) {
                if prev != *y {
                    return Err(Error::InconsistentSample(format!("object {x} labelled both 0 and 1")));
                }
            }
        }
        Ok(Self { t, pairs })
    }

    pub fn empty(t: usize) -> Self {
        Self { t, pairs: Vec::new() }
    }

    /// Labels each object with `eta`.
    pub fn labelled_by(eta: &FunctionTable, xs: &[BitString]) -> Result<Self> {
        let pairs = xs.iter().map(|x| Ok((x.clone(), eta.eval(x)?))).collect::<Result<Vec<_>>>()?;
        Ok(Self { t: eta.t(), pairs })
    }

    /// Callers must keep lengths and labels consistent.
    pub(crate) fn pairs_mut(&mut self) -> &mut Vec<(BitString, bool)> {
        &mut self.pairs
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(BitString, bool)] {
        &self.pairs
    }

    fn check_query(&self, x: &BitString) -> Result<()> {
        if x.len() != self.t {
            return Err(Error::WrongLength { expected: self.t, got: x.len() });
        }
        Ok(())
    }
}

/// How much of a sample a predictor looks at. Labels are always a function of
/// the objects, so this is about the objects alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleDependence {
    /// Only the set of distinct objects.
    Set,
    /// Only the distinct objects in order of first appearance.
    FirstOccurrences,
    /// Anything, including order and repetitions.
    Sequence,
}

/// A predictor with its sample fixed.
pub type Rule<'a> = Box<dyn Fn(&BitString) -> Result<bool> + 'a>;

/// A prediction rule `φ_n(x_1, y_1, ..., x_n, y_n, x)`.
pub trait Predictor: Send + Sync {
    fn name(&self) -> &str;

    fn predict(&self, sample: &LabeledSample, x: &BitString) -> Result<bool>;

    /// The prediction rule with the sample fixed; implementations may fit
    /// once and reuse the result across queries.
    fn fitted<'a>(&'a self, sample: &'a LabeledSample) -> Result<Rule<'a>> {
        Ok(Box::new(move |x| self.predict(sample, x)))
    }

    /// What of the sample the predictions can depend on.
    fn dependence(&self) -> SampleDependence {
        SampleDependence::Sequence
    }

    /// The function on `X_t` induced by the sample.
    fn marginal(&self, sample: &LabeledSample) -> Result<FunctionTable> {
        let values = all_strings(sample.t()).iter().map(|x| self.predict(sample, x)).collect::<Result<BitString>>()?;
        FunctionTable::new(sample.t(), values)
    }
}

/// Returns `y_i` for the first `x_i` equal to `x`, and `0` for unseen objects.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pointwise;

impl Predictor for Pointwise {
    fn name(&self) -> &str {
        "pointwise"
    }

    fn predict(&self, sample: &LabeledSample, x: &BitString) -> Result<bool> {
        sample.check_query(x)?;
        Ok(sample.pairs.iter().find(|(xi, _)| xi == x).is_some_and(|(_, y)| *y))
    }

    fn dependence(&self) -> SampleDependence {
        SampleDependence::Set
    }
}

/// Label of the sampled object sharing the longest common prefix with `x`;
/// ties go to the lowest index, and the empty sample predicts `0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PrefixNearestNeighbour;

impl Predictor for PrefixNearestNeighbour {
    fn name(&self) -> &str {
        "prefix-nn"
    }

    fn predict(&self, sample: &LabeledSample, x: &BitString) -> Result<bool> {
        sample.check_query(x)?;
        let mut best: Option<(usize, bool)> = None;
        for (xi, yi) in &sample.pairs {
            let lcp = x.common_prefix_len(xi);
            if best.is_none_or(|(b, _)| lcp > b) {
                best = Some((lcp, *yi));
            }
        }
        Ok(best.is_some_and(|(_, y)| y))
    }

    // A repeated object never beats its first occurrence on a tie.
    fn dependence(&self) -> SampleDependence {
        SampleDependence::FirstOccurrences
    }
}

/// Empirical risk minimization over programs: fits the first program of the
/// canonical enumeration that is consistent with the sample.
#[derive(Debug)]
pub struct ShortestConsistentProgram {
    cap: u64,
    synths: RwLock<HashMap<usize, Arc<RwLock<Synthesizer>>>>,
    /// Fitted programs keyed by (t, sampled-point mask, label mask).
    fits: RwLock<HashMap<(usize, u64, u64), LabellingProgram>>,
}

impl ShortestConsistentProgram {
    pub fn new(cap: u64) -> Self {
        Self { cap, synths: RwLock::new(HashMap::new()), fits: RwLock::new(HashMap::new()) }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn synth_for(&self, t: usize) -> Result<Arc<RwLock<Synthesizer>>> {
        if let Some(s) = self.synths.read().unwrap().get(&t) {
            return Ok(Arc::clone(s));
        }
        let mut map = self.synths.write().unwrap();
        if let Some(s) = map.get(&t) {
            return Ok(Arc::clone(s));
        }
        let s = Arc::new(RwLock::new(Synthesizer::new(t)?));
        map.insert(t, Arc::clone(&s));
        Ok(s)
    }

    /// The fitted program `η̄`.
    pub fn fit(&self, sample: &LabeledSample) -> Result<LabellingProgram> {
        let t = sample.t();
        if t > MAX_MASK_VARS {
            return Err(Error::OutOfRange(format!("ERM supports t <= {MAX_MASK_VARS}")));
        }
        let (mut care, mut want) = (0u64, 0u64);
        for (x, y) in sample.pairs() {
            let i = x.bits().iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
            care |= 1 << i;
            want |= (*y as u64) << i;
        }
        if let Some(p) = self.fits.read().unwrap().get(&(t, care, want)) {
            return Ok(p.clone());
        }
        let p = self.search(t, care, want)?;
        self.fits.write().unwrap().insert((t, care, want), p.clone());
        Ok(p)
    }

    fn search(&self, t: usize, care: u64, want: u64) -> Result<LabellingProgram> {
        let accept = |m: u64| m & care == want;
        let synth = self.synth_for(t)?;
        let budget = self.cap.saturating_sub(header_len(t) as u64) as usize;
        {
            let s = synth.read().unwrap();
            if let Some((_, f)) = s.first_matching_computed(budget, accept) {
                return Ok(LabellingProgram::new(t, f).expect("synthesized within bound"));
            }
            if s.computed_len() > budget {
                return Err(Error::CapExceeded { cap: self.cap });
            }
        }
        let mut s = synth.write().unwrap();
        first_program_where(&mut s, self.cap, accept).ok_or(Error::CapExceeded { cap: self.cap })
    }

    /// The fitted program together with its enumeration index.
    pub fn fit_indexed(&self, sample: &LabeledSample) -> Result<(LabellingProgram, u128)> {
        let p = self.fit(sample)?;
        let mut ix = ProgramIndexer::new(crate::machine::program_len(&p))?;
        let idx = ix.index_of(&p)?;
        Ok((p, idx))
    }
}

impl Default for ShortestConsistentProgram {
    fn default() -> Self {
        Self::new(DEFAULT_ERM_CAP)
    }
}

impl Predictor for ShortestConsistentProgram {
    fn name(&self) -> &str {
        "erm"
    }

    fn predict(&self, sample: &LabeledSample, x: &BitString) -> Result<bool> {
        sample.check_query(x)?;
        self.fit(sample)?.eval(x)
    }

    fn fitted<'a>(&'a self, sample: &'a LabeledSample) -> Result<Rule<'a>> {
        let p = self.fit(sample)?;
        Ok(Box::new(move |x| p.eval(x)))
    }

    fn dependence(&self) -> SampleDependence {
        SampleDependence::Set
    }

    fn marginal(&self, sample: &LabeledSample) -> Result<FunctionTable> {
        self.fit(sample)?.table()
    }
}

pub fn erm_fit(sample: &LabeledSample, cap: u64) -> Result<LabellingProgram> {
    ShortestConsistentProgram::new(cap).fit(sample)
}

pub fn erm_predict(sample: &LabeledSample, x: &BitString, cap: u64) -> Result<bool> {
    ShortestConsistentProgram::new(cap).predict(sample, x)
}

pub fn pointwise_predict(sample: &LabeledSample, x: &BitString) -> Result<bool> {
    Pointwise.predict(sample, x)
}

pub fn prefix_nn_predict(sample: &LabeledSample, x: &BitString) -> Result<bool> {
    PrefixNearestNeighbour.predict(sample, x)
}

/// Names accepted by [`predictor_by_name`].
pub const PREDICTOR_NAMES: [&str; 3] = ["erm", "pointwise", "prefix-nn"];

/// Looks a predictor up by name; `erm_cap` configures the ERM search.
pub fn predictor_by_name(name: &str, erm_cap: u64) -> Result<Arc<dyn Predictor>> {
    Ok(match name {
        "erm" => Arc::new(ShortestConsistentProgram::new(erm_cap)),
        "pointwise" => Arc::new(Pointwise),
        "prefix-nn" => Arc::new(PrefixNearestNeighbour),
        _ => return Err(Error::UnknownName { kind: "predictor", name: name.to_owned() }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{enumerate_programs, Formula};

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn sample(t: usize, pairs: &[(&str, bool)]) -> LabeledSample {
        LabeledSample::new(t, pairs.iter().map(|(x, y)| (bs(x), *y)).collect()).unwrap()
    }

    fn xor_sample() -> LabeledSample {
        sample(2, &[("00", false), ("01", true), ("10", true), ("11", false)])
    }

    #[test]
    fn sample_validation() {
        assert!(LabeledSample::new(2, vec![(bs("0"), true)]).is_err());
        assert!(matches!(
            LabeledSample::new(1, vec![(bs("0"), true), (bs("0"), false)]),
            Err(Error::InconsistentSample(_))
        ));
        assert!(LabeledSample::new(1, vec![(bs("0"), true), (bs("0"), true)]).is_ok());
    }

    #[test]
    fn erm_examples() {
        let p = erm_fit(&xor_sample(), DEFAULT_ERM_CAP).unwrap();
        assert_eq!(p.table().unwrap().to_string(), "0110");
        assert!(!erm_predict(&xor_sample(), &bs("11"), DEFAULT_ERM_CAP).unwrap());
        assert!(erm_predict(&xor_sample(), &bs("011"), DEFAULT_ERM_CAP).is_err());

        // Empty sample: the first program with t = 2 is VAR(0).
        let p = erm_fit(&LabeledSample::empty(2), DEFAULT_ERM_CAP).unwrap();
        let oracle = enumerate_programs(20).find(|q| q.t() == 2).unwrap();
        assert_eq!(p, oracle);
        assert_eq!(p.formula(), &Formula::var(0));

        let single = sample(2, &[("00", false)]);
        let p = erm_fit(&single, DEFAULT_ERM_CAP).unwrap();
        assert!(!p.eval(&bs("00")).unwrap());
    }

    #[test]
    fn erm_is_the_first_consistent_program() {
        let progs: Vec<_> = enumerate_programs(18).filter(|p| p.t() == 2).collect();
        let erm = ShortestConsistentProgram::new(18);
        for mask in 0u32..16 {
            for subset in 0u32..16 {
                let pairs: Vec<_> = (0..4)
                    .filter(|i| subset >> i & 1 == 1)
                    .map(|i| (BitString::from_uint(i as u64, 2), mask >> i & 1 == 1))
                    .collect();
                let s = LabeledSample::new(2, pairs).unwrap();
                let oracle = progs.iter().find(|p| s.pairs().iter().all(|(x, y)| p.eval(x).unwrap() == *y));
                match (erm.fit(&s), oracle) {
                    (Ok(p), Some(q)) => assert_eq!(&p, q),
                    (Err(Error::CapExceeded { .. }), None) => {}
                    (got, want) => panic!("mismatch: {got:?} vs {want:?}"),
                }
            }
        }
    }

    #[test]
    fn erm_cap_exhaustion_is_reported() {
        assert_eq!(erm_fit(&xor_sample(), 6), Err(Error::CapExceeded { cap: 6 }));
    }

    #[test]
    fn pointwise_examples() {
        let s = sample(4, &[("0101", true)]);
        assert!(pointwise_predict(&s, &bs("0101")).unwrap());
        assert!(!pointwise_predict(&s, &bs("1111")).unwrap());
        assert!(!pointwise_predict(&LabeledSample::empty(3), &bs("101")).unwrap());
        assert!(pointwise_predict(&s, &bs("01")).is_err());
    }

    #[test]
    fn prefix_nn_examples() {
        let s = sample(4, &[("0011", false), ("0100", true)]);
        assert!(prefix_nn_predict(&s, &bs("0111")).unwrap());
        assert!(prefix_nn_predict(&s, &bs("0100")).unwrap());
        let s = sample(2, &[("00", false), ("11", true)]);
        assert!(!prefix_nn_predict(&s, &bs("01")).unwrap());
        // tie between indices 0 and 1 goes to index 0
        let s = sample(2, &[("00", true), ("01", false)]);
        assert!(prefix_nn_predict(&s, &bs("10")).is_ok_and(|y| y));
        assert!(!prefix_nn_predict(&LabeledSample::empty(2), &bs("10")).unwrap());
    }

    #[test]
    fn registry() {
        assert_eq!(predictor_by_name("pointwise", 10).unwrap().name(), "pointwise");
        assert_eq!(predictor_by_name("erm", 10).unwrap().name(), "erm");
        assert!(matches!(predictor_by_name("nope", 10), Err(Error::UnknownName { .. })));
    }

    /// Random samples of up to 4 objects from X_t with random consistent labels.
    fn small_samples(t: usize) -> Vec<LabeledSample> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(t as u64);
        (0..150)
            .map(|_| {
                let labels: u64 = rng.gen();
                let n = rng.gen_range(0..=4);
                let pairs = (0..n)
                    .map(|_| {
                        let i = rng.gen_range(0..1u64 << t);
                        (BitString::from_uint(i, t), labels >> i & 1 == 1)
                    })
                    .collect();
                LabeledSample::new(t, pairs).unwrap()
            })
            .collect()
    }

    #[test]
    fn predictors_are_total_and_agree_on_sampled_objects() {
        let erm = ShortestConsistentProgram::default();
        let preds: [&dyn Predictor; 3] = [&Pointwise, &PrefixNearestNeighbour, &erm];
        for t in 1..=4 {
            for s in small_samples(t) {
                for p in preds {
                    let table = p.marginal(&s).unwrap();
                    for (x, y) in s.pairs() {
                        assert_eq!(table.eval(x).unwrap(), *y, "{} on {s:?}", p.name());
                    }
                }
            }
        }
    }

    #[test]
    fn pointwise_is_exact_on_full_coverage() {
        for t in 0..=3 {
            let xs = all_strings(t);
            for eta in FunctionTable::all(t.min(3)) {
                let s = LabeledSample::labelled_by(&eta, &xs).unwrap();
                assert_eq!(Pointwise.marginal(&s).unwrap(), eta);
            }
        }
    }
}
