use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::distribution::{DistributionSpec, IndexSampler};
use crate::bitcore::{all_strings, BitString};
use crate::machine::complexity::ser_display;
use crate::machine::{enumerate_class, FunctionTable};
use crate::predictors::{LabeledSample, Predictor, SampleDependence};
use crate::{Error, Result, Scalar};

/// Largest amount of work (subsets, sequences, or samples) an exact `δ_n`
/// computation may take on.
pub const EXACT_WORK_CAP: u64 = 1 << 22;

const MC_BLOCK: u64 = 256;

/// How `δ_n` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaMode {
    Exact,
    MonteCarlo { trials: u64, seed: u64 },
}

impl fmt::Display for DeltaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaMode::Exact => f.write_str("exact"),
            DeltaMode::MonteCarlo { trials, seed } => write!(f, "mc:{trials}:{seed}"),
        }
    }
}

impl FromStr for DeltaMode {
    type Err = Error;

    /// `exact` or `mc:TRIALS:SEED`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(DeltaMode::Exact);
        }
        let bad = || Error::Parse(format!("expected `exact` or `mc:TRIALS:SEED`, got `{s}`"));
        let mut parts = s.split(':');
        if parts.next() != Some("mc") {
            return Err(bad());
        }
        let trials: u64 = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let seed: u64 = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() || trials == 0 {
            return Err(bad());
        }
        Ok(DeltaMode::MonteCarlo { trials, seed })
    }
}

/// `P{x : φ(sample, x) ≠ η(x)}`.
pub fn error_prob<S: Scalar>(
    phi: &dyn Predictor,
    eta: &FunctionTable,
    sample: &LabeledSample,
    dist: &DistributionSpec<S>,
) -> Result<S> {
    if sample.t() != eta.t() {
        return Err(Error::WrongLength { expected: eta.t(), got: sample.t() });
    }
    let weights = dist.weights(eta.t())?;
    let xs = all_strings(eta.t());
    let support: Vec<usize> = (0..xs.len()).filter(|&i| weights[i] != S::zero()).collect();
    error_mass(phi, eta, sample, &weights, &xs, &support)
}

fn error_mass<S: Scalar>(
    phi: &dyn Predictor,
    eta: &FunctionTable,
    sample: &LabeledSample,
    weights: &[S],
    xs: &[BitString],
    support: &[usize],
) -> Result<S> {
    let predict = phi.fitted(sample)?;
    let mut mass = S::zero();
    for &i in support {
        if predict(&xs[i])? != eta.value_at(i) {
            mass = mass + weights[i].clone();
        }
    }
    Ok(mass)
}

/// `δ_n` for one `(φ, η, ε, P)`, reusing work across `n`.
pub struct DeltaEvaluator<'a, S> {
    phi: &'a dyn Predictor,
    eta: &'a FunctionTable,
    epsilon: S,
    weights: Vec<S>,
    xs: Vec<BitString>,
    support: Vec<usize>,
    /// Möbius coefficients over subsets of the support, built on first use.
    subset_terms: Option<Vec<(i64, S)>>,
    /// Failure indicator by sample (as support positions).
    failures: HashMap<Vec<usize>, bool>,
}

impl<'a, S: Scalar> DeltaEvaluator<'a, S> {
    pub fn new(phi: &'a dyn Predictor, eta: &'a FunctionTable, epsilon: S, dist: &DistributionSpec<S>) -> Result<Self> {
        let weights = dist.weights(eta.t())?;
        let xs = all_strings(eta.t());
        let support = (0..xs.len()).filter(|&i| weights[i] != S::zero()).collect();
        Ok(Self { phi, eta, epsilon, weights, xs, support, subset_terms: None, failures: HashMap::new() })
    }

    pub fn delta(&mut self, n: usize, mode: DeltaMode) -> Result<S> {
        if n == 0 {
            return Err(Error::Domain("δ_n needs n >= 1".into()));
        }
        match mode {
            DeltaMode::Exact => self.exact(n),
            DeltaMode::MonteCarlo { trials, seed } => self.monte_carlo(n, trials, seed),
        }
    }

    fn exact(&mut self, n: usize) -> Result<S> {
        match self.phi.dependence() {
            SampleDependence::Set => self.by_subsets(n),
            SampleDependence::FirstOccurrences => self.by_first_occurrences(n),
            SampleDependence::Sequence => self.by_sequences(n),
        }
    }

    /// Does training on these support positions (in order) fail the ε test?
    fn fails(&mut self, positions: &[usize]) -> Result<bool> {
        if let Some(&f) = self.failures.get(positions) {
            return Ok(f);
        }
        let pairs = positions
            .iter()
            .map(|&p| {
                let i = self.support[p];
                (self.xs[i].clone(), self.eta.value_at(i))
            })
            .collect();
        let sample = LabeledSample::new(self.eta.t(), pairs)?;
        let mass = error_mass(self.phi, self.eta, &sample, &self.weights, &self.xs, &self.support)?;
        let f = mass > self.epsilon;
        self.failures.insert(positions.to_vec(), f);
        Ok(f)
    }

    /// `δ_n = Σ_U c(U) P(U)^n` where `c` is the superset Möbius transform of
    /// the failure indicator over sets of sampled objects.
    fn by_subsets(&mut self, n: usize) -> Result<S> {
        if self.subset_terms.is_none() {
            let k = self.support.len();
            if k >= 63 || 1u64 << k > EXACT_WORK_CAP {
                return Err(Error::CapExceeded { cap: EXACT_WORK_CAP });
            }
            let mut coeff = vec![0i64; 1 << k];
            for (mask, c) in coeff.iter_mut().enumerate().skip(1) {
                let positions: Vec<usize> = (0..k).filter(|&p| mask >> p & 1 == 1).collect();
                *c = self.fails(&positions)? as i64;
            }
            for p in 0..k {
                for mask in 0..1usize << k {
                    if mask >> p & 1 == 0 {
                        coeff[mask] -= coeff[mask | 1 << p];
                    }
                }
            }
            let terms = coeff
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c != 0)
                .map(|(mask, &c)| {
                    let mass = (0..k)
                        .filter(|&p| mask >> p & 1 == 1)
                        .fold(S::zero(), |a, p| a + self.weights[self.support[p]].clone());
                    (c, mass)
                })
                .collect();
            self.subset_terms = Some(terms);
        }
        let mut total = S::zero();
        for (c, mass) in self.subset_terms.as_ref().expect("built above") {
            let term = num_traits::pow(mass.clone(), n) * S::from_u64(c.unsigned_abs());
            total = if *c > 0 { total + term } else { total - term };
        }
        Ok(total)
    }

    /// Sums over ordered sequences of distinct first occurrences
    /// `s_1..s_k`. With `S_j = p(s_1) + … + p(s_j)`, such a sequence has
    /// probability `Π p(s_j) · h_{n-k}(S_1, …, S_k)`, `h_d` the complete
    /// homogeneous polynomial of degree `d`.
    fn by_first_occurrences(&mut self, n: usize) -> Result<S> {
        let k = self.support.len();
        let mut work = 0u64;
        let mut perms = 1u64;
        for j in 0..k.min(n) {
            perms = perms.saturating_mul((k - j) as u64);
            work = work.saturating_add(perms);
        }
        if work > EXACT_WORK_CAP {
            return Err(Error::CapExceeded { cap: EXACT_WORK_CAP });
        }
        let mut h0 = vec![S::zero(); n + 1];
        h0[0] = S::one();
        let mut seq = Vec::with_capacity(k.min(n));
        let mut used = vec![false; k];
        let mut total = S::zero();
        self.first_occurrence_dfs(n, &mut seq, &mut used, &S::one(), &S::zero(), &h0, &mut total)?;
        Ok(total)
    }

    #[allow(clippy::too_many_arguments)]
    fn first_occurrence_dfs(
        &mut self,
        n: usize,
        seq: &mut Vec<usize>,
        used: &mut [bool],
        prod: &S,
        prefix_mass: &S,
        h: &[S],
        total: &mut S,
    ) -> Result<()> {
        if seq.len() == n {
            return Ok(());
        }
        for p in 0..used.len() {
            if used[p] {
                continue;
            }
            let w = self.weights[self.support[p]].clone();
            let mass = prefix_mass.clone() + w.clone();
            let prod = prod.clone() * w;
            // h_k(d) = h_{k-1}(d) + S_k h_k(d-1)
            let mut next = h.to_vec();
            for d in 1..next.len() {
                next[d] = next[d].clone() + mass.clone() * next[d - 1].clone();
            }
            seq.push(p);
            used[p] = true;
            if self.fails(seq)? {
                *total = total.clone() + prod.clone() * next[n - seq.len()].clone();
            }
            self.first_occurrence_dfs(n, seq, used, &prod, &mass, &next, total)?;
            used[p] = false;
            seq.pop();
        }
        Ok(())
    }

    /// Direct sum over all `|support|^n` ordered samples.
    fn by_sequences(&mut self, n: usize) -> Result<S> {
        let k = self.support.len() as u64;
        match k.checked_pow(n as u32) {
            Some(w) if w <= EXACT_WORK_CAP => {}
            _ => return Err(Error::CapExceeded { cap: EXACT_WORK_CAP }),
        }
        let mut idx = vec![0usize; n];
        let mut total = S::zero();
        loop {
            if self.fails(&idx)? {
                let p = idx.iter().fold(S::one(), |a, &p| a * self.weights[self.support[p]].clone());
                total = total + p;
            }
            let mut j = 0;
            while j < n {
                idx[j] += 1;
                if idx[j] < k as usize {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == n {
                break;
            }
        }
        Ok(total)
    }

    fn monte_carlo(&self, n: usize, trials: u64, seed: u64) -> Result<S> {
        if trials == 0 {
            return Err(Error::Domain("Monte Carlo needs at least one trial".into()));
        }
        let sampler = IndexSampler::new(&self.weights);
        let blocks = trials.div_ceil(MC_BLOCK);
        let failures = (0..blocks)
            .into_par_iter()
            .map(|block| -> Result<u64> {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(block);
                let count = MC_BLOCK.min(trials - block * MC_BLOCK);
                let mut fails = 0;
                let mut sample = LabeledSample::empty(self.eta.t());
                for _ in 0..count {
                    let pairs = sample.pairs_mut();
                    pairs.clear();
                    for _ in 0..n {
                        let i = sampler.draw(&mut rng);
                        pairs.push((self.xs[i].clone(), self.eta.value_at(i)));
                    }
                    let mass = error_mass(self.phi, self.eta, &sample, &self.weights, &self.xs, &self.support)?;
                    fails += (mass > self.epsilon) as u64;
                }
                Ok(fails)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        Ok(S::from_ratio(failures, trials))
    }
}

/// `δ_n(φ, η, ε)` under one distribution.
pub fn delta_n<S: Scalar>(
    phi: &dyn Predictor,
    eta: &FunctionTable,
    epsilon: S,
    n: usize,
    dist: &DistributionSpec<S>,
    mode: DeltaMode,
) -> Result<S> {
    DeltaEvaluator::new(phi, eta, epsilon, dist)?.delta(n, mode)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct DeltaPoint<S: Scalar> {
    pub n: usize,
    #[serde(serialize_with = "ser_display")]
    pub delta_n: S,
}

/// `δ_n` for each `n` in `ns`.
pub fn delta_curve<S: Scalar>(
    phi: &dyn Predictor,
    eta: &FunctionTable,
    epsilon: S,
    dist: &DistributionSpec<S>,
    ns: impl IntoIterator<Item = usize>,
    mode: DeltaMode,
) -> Result<Vec<DeltaPoint<S>>> {
    let mut ev = DeltaEvaluator::new(phi, eta, epsilon, dist)?;
    ns.into_iter().map(|n| Ok(DeltaPoint { n, delta_n: ev.delta(n, mode)? })).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SampleComplexityReport<S: Scalar> {
    pub predictor: String,
    /// Truth table of `η` in lexicographic order of `X_t`.
    pub eta: String,
    pub t: usize,
    pub distribution: String,
    #[serde(serialize_with = "ser_display")]
    pub epsilon: S,
    #[serde(serialize_with = "ser_display")]
    pub delta: S,
    pub mode: DeltaMode,
    pub n_max: usize,
    /// `δ_n` for every scanned `n`.
    pub deltas: Vec<DeltaPoint<S>>,
    /// Smallest `n <= n_max` with `δ_n <= δ`, if any.
    pub sample_complexity: Option<usize>,
    /// `l(η)`, when supplied.
    pub l_eta: Option<u32>,
    pub prop1_bound: Option<u64>,
}

impl<S: Scalar> SampleComplexityReport<S> {
    /// Attaches `l(η)` and the matching upper bound on the sample size.
    pub fn with_length(mut self, l_eta: u32) -> Self {
        self.l_eta = Some(l_eta);
        self.prop1_bound = super::vc::prop1_bound(l_eta as u64, self.epsilon.to_f64(), self.delta.to_f64()).ok();
        self
    }
}

/// `N(φ, η, δ, ε) = min{n : δ_n ≤ δ}`, scanning `n = 1..=n_max` upward.
#[allow(clippy::too_many_arguments)]
pub fn sample_complexity<S: Scalar>(
    phi: &dyn Predictor,
    eta: &FunctionTable,
    delta: S,
    epsilon: S,
    dist: &DistributionSpec<S>,
    n_max: usize,
    mode: DeltaMode,
) -> Result<SampleComplexityReport<S>> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let mut ev = DeltaEvaluator::new(phi, eta, epsilon.clone(), dist)?;
    let mut deltas = Vec::new();
    let mut found = None;
    for n in 1..=n_max {
        let d = ev.delta(n, mode)?;
        let done = d <= delta;
        deltas.push(DeltaPoint { n, delta_n: d });
        if done {
            found = Some(n);
            break;
        }
    }
    Ok(SampleComplexityReport {
        predictor: phi.name().to_owned(),
        eta: eta.values().to_string(),
        t: eta.t(),
        distribution: dist.label(),
        epsilon,
        delta,
        mode,
        n_max,
        deltas,
        sample_complexity: found,
        l_eta: None,
        prop1_bound: None,
    })
}

/// Supremum of `N` over a class of targets and a family of distributions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorstCase {
    /// `None` if some pair needs more than `n_max` samples.
    pub value: Option<usize>,
    /// The first `(η, P)` attaining the value (or not resolved within `n_max`).
    pub eta: Option<String>,
    pub distribution: Option<String>,
    pub pairs_evaluated: usize,
    pub unresolved: usize,
}

#[allow(clippy::too_many_arguments)]
pub fn worst_case_n_over<S: Scalar>(
    phi: &dyn Predictor,
    class: &[FunctionTable],
    delta: S,
    epsilon: S,
    family: &[DistributionSpec<S>],
    n_max: usize,
    mode: DeltaMode,
) -> Result<WorstCase> {
    let pairs: Vec<(&FunctionTable, &DistributionSpec<S>)> =
        class.iter().flat_map(|eta| family.iter().map(move |d| (eta, d))).collect();
    let results: Vec<Option<usize>> = pairs
        .par_iter()
        .map(|(eta, d)| {
            sample_complexity(phi, eta, delta.clone(), epsilon.clone(), d, n_max, mode).map(|r| r.sample_complexity)
        })
        .collect::<Result<_>>()?;
    let mut worst = WorstCase {
        value: Some(0),
        eta: None,
        distribution: None,
        pairs_evaluated: pairs.len(),
        unresolved: results.iter().filter(|r| r.is_none()).count(),
    };
    // Unresolved (None) ranks above every finite value.
    let rank = |r: Option<usize>| r.map_or(usize::MAX, |v| v);
    for ((eta, d), r) in pairs.iter().zip(&results) {
        if worst.eta.is_none() || rank(*r) > rank(worst.value) {
            worst.value = *r;
            worst.eta = Some(eta.values().to_string());
            worst.distribution = Some(d.label());
        }
    }
    Ok(worst)
}

/// `𝒩_φ(k, δ, ε)` over the targets on `X_t` with `l(η) <= k`.
#[allow(clippy::too_many_arguments)]
pub fn worst_case_n<S: Scalar>(
    phi: &dyn Predictor,
    k: u32,
    t: usize,
    delta: S,
    epsilon: S,
    family: &[DistributionSpec<S>],
    n_max: usize,
    mode: DeltaMode,
    cap: u64,
) -> Result<WorstCase> {
    let class = enumerate_class(k, t, cap)?;
    worst_case_n_over(phi, &class, delta, epsilon, family, n_max, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predictors::{Pointwise, PrefixNearestNeighbour, ShortestConsistentProgram};
    use num_rational::BigRational;

    fn q(a: u64, b: u64) -> BigRational {
        BigRational::from_ratio(a, b)
    }

    fn xor() -> FunctionTable {
        FunctionTable::new(2, "0110".parse().unwrap()).unwrap()
    }

    /// Sequence-dependence wrapper used to force the brute-force route.
    struct AsSequence<'a>(&'a dyn Predictor);
    impl Predictor for AsSequence<'_> {
        fn name(&self) -> &str {
            self.0.name()
        }
        fn predict(&self, s: &LabeledSample, x: &BitString) -> Result<bool> {
            self.0.predict(s, x)
        }
    }

    #[test]
    fn error_prob_examples() {
        let s = LabeledSample::new(2, vec![("01".parse().unwrap(), true)]).unwrap();
        let e: BigRational = error_prob(&Pointwise, &xor(), &s, &DistributionSpec::Uniform).unwrap();
        assert_eq!(e, q(1, 4));
        let full = LabeledSample::labelled_by(&xor(), &all_strings(2)).unwrap();
        let e: BigRational = error_prob(&Pointwise, &xor(), &full, &DistributionSpec::Uniform).unwrap();
        assert_eq!(e, q(0, 1));
        let ones = FunctionTable::new(2, "1111".parse().unwrap()).unwrap();
        let e: BigRational =
            error_prob(&Pointwise, &ones, &LabeledSample::empty(2), &DistributionSpec::Uniform).unwrap();
        assert_eq!(e, q(1, 1));
        let wrong_t = LabeledSample::empty(3);
        assert!(error_prob::<f64>(&Pointwise, &xor(), &wrong_t, &DistributionSpec::Uniform).is_err());
    }

    #[test]
    fn delta_examples() {
        let d = delta_n(&Pointwise, &xor(), q(3, 10), 1, &DistributionSpec::Uniform, DeltaMode::Exact).unwrap();
        assert_eq!(d, q(1, 2));
        let d = delta_n(&Pointwise, &xor(), q(1, 1), 7, &DistributionSpec::Uniform, DeltaMode::Exact).unwrap();
        assert_eq!(d, q(0, 1));
        assert!(delta_n(&Pointwise, &xor(), q(1, 1), 0, &DistributionSpec::Uniform, DeltaMode::Exact).is_err());
    }

    #[test]
    fn exact_routes_agree_with_brute_force() {
        let erm = ShortestConsistentProgram::default();
        let preds: [&dyn Predictor; 3] = [&Pointwise, &PrefixNearestNeighbour, &erm];
        let dists = [
            DistributionSpec::Uniform,
            DistributionSpec::ProductBernoulli(q(1, 4)),
            DistributionSpec::Explicit(vec![q(1, 2), q(0, 1), q(1, 3), q(1, 6)]),
        ];
        for eta in FunctionTable::all(2) {
            for phi in preds {
                for dist in &dists {
                    for eps in [q(0, 1), q(1, 5), q(1, 2)] {
                        let mut fast = DeltaEvaluator::new(phi, &eta, eps.clone(), dist).unwrap();
                        let brute_phi = AsSequence(phi);
                        let mut slow = DeltaEvaluator::new(&brute_phi, &eta, eps, dist).unwrap();
                        for n in 1..=5 {
                            let a = fast.delta(n, DeltaMode::Exact).unwrap();
                            let b = slow.delta(n, DeltaMode::Exact).unwrap();
                            assert_eq!(a, b, "{} {eta} {dist} n={n}", phi.name());
                            assert!(a >= q(0, 1) && a <= q(1, 1));
                        }
                    }
                }
            }
        }
    }

    /// The sample-probability weights of the first-occurrence route add up to
    /// one: with a predictor failing on every sample, `δ_n = 1`.
    #[test]
    fn first_occurrence_mass_is_normalized() {
        struct AlwaysWrongFo;
        impl Predictor for AlwaysWrongFo {
            fn name(&self) -> &str {
                "always-wrong"
            }
            fn predict(&self, _: &LabeledSample, x: &BitString) -> Result<bool> {
                Ok(x.count_ones().is_multiple_of(2))
            }
            fn dependence(&self) -> SampleDependence {
                SampleDependence::FirstOccurrences
            }
        }
        let parity = FunctionTable::new(3, "01101001".parse().unwrap()).unwrap();
        let dist = DistributionSpec::ProductBernoulli(q(1, 3));
        for n in 1..=6 {
            let d = delta_n(&AlwaysWrongFo, &parity, q(0, 1), n, &dist, DeltaMode::Exact).unwrap();
            assert_eq!(d, q(1, 1));
        }
    }

    #[test]
    fn monte_carlo_matches_exact_within_three_sigma() {
        let cases = [(q(3, 10), 1usize), (q(1, 10), 4), (q(1, 5), 3)];
        for (eps, n) in cases {
            let exact = delta_n(&Pointwise, &xor(), eps.clone(), n, &DistributionSpec::Uniform, DeltaMode::Exact)
                .unwrap()
                .to_f64();
            let mode = DeltaMode::MonteCarlo { trials: 10_000, seed: 11 };
            let mc: f64 = delta_n(&Pointwise, &xor(), eps.to_f64(), n, &DistributionSpec::Uniform, mode).unwrap();
            let sigma = (exact * (1.0 - exact) / 10_000.0).sqrt();
            assert!((mc - exact).abs() <= 3.0 * sigma, "eps={eps} n={n}: {mc} vs {exact}");
            let again: f64 = delta_n(&Pointwise, &xor(), eps.to_f64(), n, &DistributionSpec::Uniform, mode).unwrap();
            assert_eq!(mc, again);
        }
    }

    #[test]
    fn sample_complexity_examples() {
        let r =
            sample_complexity(&Pointwise, &xor(), q(3, 5), q(3, 10), &DistributionSpec::Uniform, 10, DeltaMode::Exact)
                .unwrap();
        assert_eq!(r.sample_complexity, Some(1));
        let r =
            sample_complexity(&Pointwise, &xor(), q(0, 1), q(0, 1), &DistributionSpec::Uniform, 6, DeltaMode::Exact)
                .unwrap();
        assert_eq!(r.sample_complexity, None);
        assert_eq!(r.deltas.len(), 6);
        let r =
            sample_complexity(&Pointwise, &xor(), q(1, 10), q(1, 10), &DistributionSpec::Uniform, 40, DeltaMode::Exact)
                .unwrap();
        let n = r.sample_complexity.unwrap();
        assert!(r.deltas[..n - 1].iter().all(|p| p.delta_n > q(1, 10)));
        assert!(r.deltas[n - 1].delta_n <= q(1, 10));
    }

    #[test]
    fn worst_case_is_monotone_in_k() {
        let family = vec![DistributionSpec::Uniform];
        let mut prev = 0;
        for k in [1, 4, 6, 8] {
            let w = worst_case_n(&Pointwise, k, 2, q(1, 10), q(1, 10), &family, 60, DeltaMode::Exact, 40).unwrap();
            let v = w.value.unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn delta_mode_text() {
        assert_eq!("exact".parse::<DeltaMode>().unwrap(), DeltaMode::Exact);
        let m: DeltaMode = "mc:100:7".parse().unwrap();
        assert_eq!(m.to_string(), "mc:100:7");
        assert!("mc:0:1".parse::<DeltaMode>().is_err());
        assert!("mc:1".parse::<DeltaMode>().is_err());
    }
}
