//! Channel fidelity over depolarizing channels.
//!
//! For a stabilizer code with syndrome representatives `T`, the channel
//! fidelity equals the total probability of the correctable set `T x S`.
//! Tallying that set by weight gives a weight enumerator; the fidelity is
//! then a polynomial in the depolarizing rate, evaluated here either in
//! exact rational arithmetic or in floating point. Codes with a receiver
//! split use the bivariate enumerator over (sender weight, receiver
//! weight).
//!
//! Enumeration of `T x S` walks the stabilizer group in Gray-code order for
//! each representative and is partitioned over representatives for
//! parallelism; per-partition tallies merge by addition, so results do not
//! depend on the worker count.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::codes::{CombinationCode, EaqecCode};
use crate::decoder::{
    logical_error_distribution, sample_error, Decoder, LogicalErrorDistribution, NoiseModel,
    SyndromeTable,
};
use crate::symplectic::PauliWord;
use crate::{Error, Result};

/// Exact-enumeration ceiling: `4^14` products of `T x S`.
pub const MAX_EXACT_GENERATORS: usize = 14;

/// Integer weight tallies `a_w` of a set of Pauli words on `n` qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightEnumerator {
    pub n: usize,
    pub a: Vec<u64>,
}

impl WeightEnumerator {
    pub fn new(n: usize, a: Vec<u64>) -> WeightEnumerator {
        assert_eq!(a.len(), n + 1);
        WeightEnumerator { n, a }
    }

    pub fn total(&self) -> u64 {
        self.a.iter().sum()
    }
}

/// Integer tallies `a_{w,w'}` by (sender weight, receiver weight).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateWeightEnumerator {
    pub n_alice: usize,
    pub n_bob: usize,
    /// Row-major: `a[wa * (n_bob + 1) + wb]`.
    pub a: Vec<u64>,
}

impl BivariateWeightEnumerator {
    pub fn get(&self, wa: usize, wb: usize) -> u64 {
        self.a[wa * (self.n_bob + 1) + wb]
    }

    pub fn total(&self) -> u64 {
        self.a.iter().sum()
    }

    /// Collapse to a univariate enumerator over total weight.
    pub fn univariate(&self) -> WeightEnumerator {
        let n = self.n_alice + self.n_bob;
        let mut a = vec![0u64; n + 1];
        for wa in 0..=self.n_alice {
            for wb in 0..=self.n_bob {
                a[wa + wb] += self.get(wa, wb);
            }
        }
        WeightEnumerator::new(n, a)
    }

    /// The receiver-weight-zero row, i.e. the enumerator that survives a
    /// perfect receiver (`p_b = 0`).
    pub fn alice_row(&self) -> WeightEnumerator {
        let a = (0..=self.n_alice).map(|wa| self.get(wa, 0)).collect();
        WeightEnumerator::new(self.n_alice, a)
    }
}

/// Tally the correctable set `T x S` by (sender weight, receiver weight).
pub fn enumerate_correctable(table: &SyndromeTable) -> Result<BivariateWeightEnumerator> {
    let view = table.view();
    let gens = &view.generators;
    let g = gens.len();
    if g > MAX_EXACT_GENERATORS {
        return Err(Error::Capability(format!(
            "exact enumeration limited to {MAX_EXACT_GENERATORS} generators, code has {g}"
        )));
    }
    let (na, nb) = (view.n_alice, view.n_bob);
    let words = view.n_total().div_ceil(64);
    let mut alice_mask = vec![0u64; words];
    for q in 0..na {
        alice_mask[q / 64] |= 1 << (q % 64);
    }
    let mut bob_mask = vec![0u64; words];
    for q in na..na + nb {
        bob_mask[q / 64] |= 1 << (q % 64);
    }
    let split_weights = |p: &PauliWord| -> (usize, usize) {
        let mut wa = 0usize;
        let mut wb = 0usize;
        for (i, (x, z)) in p.x_words().iter().zip(p.z_words()).enumerate() {
            let occ = x | z;
            wa += ((occ & alice_mask[i]).count_ones()) as usize;
            wb += ((occ & bob_mask[i]).count_ones()) as usize;
        }
        (wa, wb)
    };

    let cols = nb + 1;
    let tally = table
        .representatives()
        .par_chunks(256)
        .map(|chunk| {
            let mut local = vec![0u64; (na + 1) * cols];
            for rep in chunk {
                let mut acc = rep.clone();
                let (wa, wb) = split_weights(&acc);
                local[wa * cols + wb] += 1;
                // Gray walk over the stabilizer group
                for i in 1u64..1 << g {
                    let j = i.trailing_zeros() as usize;
                    acc.multiply_assign(&gens[j]);
                    let (wa, wb) = split_weights(&acc);
                    local[wa * cols + wb] += 1;
                }
            }
            local
        })
        .reduce(
            || vec![0u64; (na + 1) * cols],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    Ok(BivariateWeightEnumerator {
        n_alice: na,
        n_bob: nb,
        a: tally,
    })
}

/// Channel fidelity as exact rational coefficients of the depolarizing
/// rate `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FidelityPolynomial {
    coeffs: Vec<BigRational>,
}

impl FidelityPolynomial {
    /// Coefficients by degree.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval_f64(&self, p: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * p + c.to_f64().unwrap())
    }

    pub fn eval_exact(&self, p: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * p + c)
    }

    /// Comma-separated exact coefficients by degree, e.g.
    /// `1, 0, -45/8, 75/8, -45/8, 9/8`.
    pub fn to_rational_string(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn big_binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    acc
}

/// Expand `sum_w a_w (1 - 3p/4)^(n-w) (p/4)^w` into exact rational
/// coefficients of `p`.
pub fn fidelity_poly(enumerator: &WeightEnumerator) -> FidelityPolynomial {
    let n = enumerator.n;
    let mut coeffs = vec![BigRational::zero(); n + 1];
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
    let neg_three_quarter = BigRational::new(BigInt::from(-3), BigInt::from(4));
    for (w, &aw) in enumerator.a.iter().enumerate() {
        if aw == 0 {
            continue;
        }
        let aw = BigRational::from(BigInt::from(aw));
        let scale = aw * quarter.pow(w as i32);
        for j in 0..=n - w {
            let c = BigRational::from(BigInt::from(big_binomial(n - w, j)))
                * neg_three_quarter.pow(j as i32);
            coeffs[w + j] += &scale * c;
        }
    }
    FidelityPolynomial { coeffs }
}

/// Evaluate the bivariate fidelity `sum a_{w,w'} q_w r_{w'}` in floating
/// point. A univariate enumerator corresponds to `n_bob = 0`, where the
/// receiver factor is identically one.
pub fn fidelity_value(enumerator: &BivariateWeightEnumerator, noise: &NoiseModel) -> Result<f64> {
    if noise.n_alice != enumerator.n_alice || noise.n_bob != enumerator.n_bob {
        return Err(Error::Dimension(format!(
            "noise split {}+{} does not match enumerator split {}+{}",
            noise.n_alice, noise.n_bob, enumerator.n_alice, enumerator.n_bob
        )));
    }
    let mut total = 0.0;
    for wa in 0..=enumerator.n_alice {
        for wb in 0..=enumerator.n_bob {
            let a = enumerator.get(wa, wb);
            if a != 0 {
                total += a as f64 * noise.class_prob(wa, wb);
            }
        }
    }
    Ok(total)
}

/// The two closed-form lower bounds on the channel fidelity.
#[derive(Debug, Clone, Copy)]
pub struct LowerBounds {
    /// Total probability of the syndrome representatives themselves.
    pub representative: f64,
    /// Probability of all errors of weight at most `floor((d-1)/2)`;
    /// requires a declared distance and a min-weight decoder to be a true
    /// lower bound.
    pub distance: Option<f64>,
}

/// Compute the representative bound and, when `d` is known, the distance
/// bound.
pub fn fidelity_lower_bounds(
    table: &SyndromeTable,
    noise: &NoiseModel,
    d: Option<usize>,
) -> Result<LowerBounds> {
    let view = table.view();
    if noise.n_alice != view.n_alice || noise.n_bob != view.n_bob {
        return Err(Error::Dimension("noise split does not match the table".into()));
    }
    let representative = table
        .representatives()
        .iter()
        .map(|rep| noise.word_prob(rep))
        .sum();
    let distance = d.map(|d| {
        let t = (d - 1) / 2;
        let mut total = 0.0;
        for wa in 0..=noise.n_alice.min(t) {
            for wb in 0..=noise.n_bob.min(t - wa) {
                let count = big_binomial(noise.n_alice, wa).to_f64().unwrap()
                    * 3f64.powi(wa as i32)
                    * big_binomial(noise.n_bob, wb).to_f64().unwrap()
                    * 3f64.powi(wb as i32);
                total += count * noise.class_prob(wa, wb);
            }
        }
        total
    });
    Ok(LowerBounds {
        representative,
        distance,
    })
}

/// A Monte Carlo fidelity estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub successes: u64,
    pub samples: u64,
}

/// Estimate the channel fidelity by sampling: draw errors qubit by qubit
/// from the depolarizing law, decode, and count successes.
///
/// Sample `i` uses a counter-keyed random stream, so the result is
/// bit-identical for a fixed `(seed, samples)` no matter how many rayon
/// workers participate.
pub fn monte_carlo_fidelity(
    table: &SyndromeTable,
    noise: &NoiseModel,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::Structure("need at least one sample".into()));
    }
    let view = table.view();
    if noise.n_alice != view.n_alice || noise.n_bob != view.n_bob {
        return Err(Error::Dimension("noise split does not match the table".into()));
    }
    let decoder = Decoder::new(table.clone())?;
    let base = ChaCha12Rng::seed_from_u64(seed);
    let successes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let e = sample_error(noise, &base, i);
            u64::from(decoder.decode(&e).expect("sampled error has the right size").success)
        })
        .sum::<u64>();
    let estimate = successes as f64 / samples as f64;
    let std_error = (estimate * (1.0 - estimate) / samples as f64).sqrt();
    Ok(MonteCarloEstimate {
        estimate,
        std_error,
        successes,
        samples,
    })
}

/// Precomputed success counts of an EAQEC decoder against sender errors of
/// each weight combined with each receiver logical class: entry `(w, L)`
/// counts the weight-`w` sender words that decode successfully when the
/// receiver's ebits carry the class-`L` logical error. Build once, then
/// evaluate cheaply at any rates.
pub struct ComposeTally {
    n: usize,
    c: usize,
    /// `counts[wa * 4^c + class]`.
    counts: Vec<u64>,
}

impl ComposeTally {
    pub fn build(outer: &EaqecCode, outer_table: &SyndromeTable) -> Result<ComposeTally> {
        let n = outer.n();
        let c = outer.c();
        if outer_table.view().n_alice != n || outer_table.view().n_bob != c {
            return Err(Error::Dimension("table does not match the outer code".into()));
        }
        if n > 12 || c > 8 {
            return Err(Error::Capability(format!(
                "sender enumeration limited to 12+8 qubits, code has {n}+{c}"
            )));
        }
        let decoder = Decoder::new(outer_table.clone())?;
        let classes = 1usize << (2 * c);
        let mut counts = vec![0u64; (n + 1) * classes];
        for class in 0..classes {
            let bob_word =
                LogicalErrorDistribution::class_word(c, class as u64).embed(n + c, n);
            for wa in 0..=n {
                let mut hits = 0u64;
                for alice in crate::decoder::words_of_weight(n, wa) {
                    let e = alice.embed(n + c, 0).multiply(&bob_word);
                    if decoder.decode(&e)?.success {
                        hits += 1;
                    }
                }
                counts[wa * classes + class] = hits;
            }
        }
        Ok(ComposeTally { n, c, counts })
    }

    /// Success probability with sender errors at rate `p_a` and receiver
    /// logical errors distributed as `bob`.
    pub fn evaluate(&self, p_a: f64, bob: &LogicalErrorDistribution) -> Result<f64> {
        if bob.k != self.c {
            return Err(Error::Dimension(format!(
                "distribution over {} logical qubits, outer code uses {} ebits",
                bob.k, self.c
            )));
        }
        let noise = NoiseModel::uniform(p_a, self.n)?;
        let classes = 1usize << (2 * self.c);
        let mut total = 0.0;
        for wa in 0..=self.n {
            let q = noise.q(wa);
            if q == 0.0 {
                continue;
            }
            for (class, &prob) in bob.probs.iter().enumerate() {
                let hits = self.counts[wa * classes + class];
                if hits != 0 && prob != 0.0 {
                    total += q * prob * hits as f64;
                }
            }
        }
        Ok(total)
    }
}

/// Success probability of an EAQEC decoder when sender errors follow the
/// depolarizing law at `p_a` and the receiver's ebits carry logical errors
/// with the given class distribution (the sequential-decoding composition).
pub fn compose_fidelity(
    outer: &EaqecCode,
    outer_table: &SyndromeTable,
    p_a: f64,
    bob: &LogicalErrorDistribution,
) -> Result<f64> {
    ComposeTally::build(outer, outer_table)?.evaluate(p_a, bob)
}

/// Channel fidelity of a combination code under sequential decoding: the
/// inner code's residual logical errors (at rate `p_b`) feed the outer
/// EAQEC decoder alongside sender errors at rate `p_a`. Both component
/// decoders use min-weight tables.
pub fn sequential_fidelity(comb: &CombinationCode, noise: &NoiseModel) -> Result<f64> {
    if noise.n_alice != comb.outer.n() || noise.n_bob != comb.inner.n() {
        return Err(Error::Dimension(
            "noise split must be (outer sender qubits, inner qubits)".into(),
        ));
    }
    let inner_table = SyndromeTable::build_min_weight(&comb.inner.view())?;
    let dist = logical_error_distribution(&comb.inner, &inner_table, noise.p_b)?;
    let outer_table = SyndromeTable::build_min_weight(&comb.outer.extended_view())?;
    compose_fidelity(&comb.outer, &outer_table, noise.p_a, &dist)
}

/// Krawtchouk polynomial
/// `P_w(w', n) = sum_u (-1)^u 3^(w-u) C(w', u) C(n-w', w-u)`.
pub fn krawtchouk(w: usize, wp: usize, n: usize) -> BigInt {
    let mut acc = BigInt::zero();
    for u in 0..=w {
        let term = BigInt::from(3u32).pow((w - u) as u32)
            * BigInt::from(big_binomial(wp, u))
            * BigInt::from(big_binomial(n - wp, w - u));
        if u % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Quaternary MacWilliams transform
/// `B_w = (1/|S|) sum_{w'} P_w(w', n) A_{w'}`.
///
/// For the enumerator of a stabilizer group of the given size this yields
/// the enumerator of its normalizer; non-integer or negative output means
/// the input was not such an enumerator.
pub fn macwilliams_transform(a: &WeightEnumerator, group_size: u64) -> Result<WeightEnumerator> {
    if a.total() != group_size {
        return Err(Error::Structure(format!(
            "enumerator sums to {}, expected the group size {group_size}",
            a.total()
        )));
    }
    let n = a.n;
    let size = BigInt::from(group_size);
    let mut out = Vec::with_capacity(n + 1);
    for w in 0..=n {
        let mut acc = BigInt::zero();
        for (wp, &awp) in a.a.iter().enumerate() {
            acc += krawtchouk(w, wp, n) * BigInt::from(awp);
        }
        let value = BigRational::new(acc, size.clone());
        if !value.is_integer() || value.is_negative() {
            return Err(Error::Structure(format!(
                "transform coefficient B_{w} = {value} is not a nonnegative integer; \
                 input is not a stabilizer-group enumerator"
            )));
        }
        out.push(value.to_integer().to_u64().ok_or_else(|| {
            Error::Capability(format!("transform coefficient B_{w} exceeds u64"))
        })?);
    }
    Ok(WeightEnumerator::new(n, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{builtin_codes, combine, syndrome, Code};
    use crate::decoder::words_of_weight;
    use crate::symplectic::{group_elements, in_group, Pauli};

    fn table_for(name: &str) -> SyndromeTable {
        SyndromeTable::build_min_weight(&builtin_codes().get(name).unwrap().code.view()).unwrap()
    }

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn enumerate_five_qubit() {
        let e = enumerate_correctable(&table_for("five_qubit")).unwrap();
        assert_eq!(e.total(), 256);
        let u = e.univariate();
        assert_eq!(u.a, vec![1, 15, 0, 60, 135, 45]);
    }

    #[test]
    fn enumerate_trivial_code() {
        let code = crate::codes::StabilizerCode::new(1, vec![]).unwrap();
        let table = SyndromeTable::build_min_weight(&code.view()).unwrap();
        let e = enumerate_correctable(&table).unwrap();
        assert_eq!(e.univariate().a, vec![1, 0]);
    }

    #[test]
    fn enumerate_bowen_bivariate() {
        let e = enumerate_correctable(&table_for("bowen_3_1_2")).unwrap();
        let expected = [
            ((0, 0), 1),
            ((1, 0), 9),
            ((3, 0), 6),
            ((0, 1), 6),
            ((2, 1), 36),
            ((3, 1), 54),
            ((1, 2), 18),
            ((2, 2), 81),
            ((3, 2), 45),
        ];
        let mut sum = 0;
        for ((wa, wb), v) in expected {
            assert_eq!(e.get(wa, wb), v, "a_{{{wa},{wb}}}");
            sum += v;
        }
        assert_eq!(e.total(), sum);
    }

    #[test]
    fn enumerator_invariant_under_representative_swap() {
        let view = builtin_codes().get("bit_flip").unwrap().code.view();
        let table = SyndromeTable::build_min_weight(&view).unwrap();
        let stab: Vec<PauliWord> = group_elements(&view.generators).unwrap().collect();
        let mut words = table.representatives().to_vec();
        for (i, word) in words.iter_mut().enumerate().skip(1) {
            word.multiply_assign(&stab[(i + 1) % stab.len()]);
        }
        let swapped = SyndromeTable::from_representatives(&view, &words).unwrap();
        assert_eq!(
            enumerate_correctable(&table).unwrap(),
            enumerate_correctable(&swapped).unwrap()
        );
    }

    #[test]
    fn poly_bit_flip_matches_table() {
        let e = enumerate_correctable(&table_for("bit_flip")).unwrap();
        let poly = fidelity_poly(&e.univariate());
        assert_eq!(
            poly.coefficients(),
            &[rat(1, 1), rat(-3, 2), rat(9, 8), rat(-3, 8)]
        );
        assert_eq!(poly.to_rational_string(), "1, -3/2, 9/8, -3/8");
    }

    #[test]
    fn poly_five_qubit_matches_table() {
        let e = enumerate_correctable(&table_for("five_qubit")).unwrap();
        let poly = fidelity_poly(&e.univariate());
        assert_eq!(
            poly.coefficients(),
            &[
                rat(1, 1),
                rat(0, 1),
                rat(-45, 8),
                rat(75, 8),
                rat(-45, 8),
                rat(9, 8)
            ]
        );
    }

    #[test]
    fn poly_endpoints() {
        for name in ["bit_flip", "four_two_two", "five_qubit", "steane"] {
            let view = builtin_codes().get(name).unwrap().code.view();
            let e = enumerate_correctable(&table_for(name)).unwrap();
            let poly = fidelity_poly(&e.univariate());
            assert_eq!(poly.eval_exact(&BigRational::zero()), BigRational::one());
            let quarter_pow_k = BigRational::new(BigInt::one(), BigInt::from(4).pow(view.k() as u32));
            assert_eq!(poly.eval_exact(&BigRational::one()), quarter_pow_k, "{name}");
        }
    }

    #[test]
    fn value_closed_forms() {
        let bowen = enumerate_correctable(&table_for("bowen_3_1_2")).unwrap();
        let p = 0.13;
        let noise = NoiseModel::new(p, 0.0, 3, 2).unwrap();
        let got = fidelity_value(&bowen, &noise).unwrap();
        let q = |w: usize| (1.0f64 - 0.75 * p).powi(3 - w as i32) * (p / 4.0).powi(w as i32);
        assert!((got - (q(0) + 9.0 * q(1) + 6.0 * q(3))).abs() < 1e-15);

        // perfect channels
        let noise0 = NoiseModel::new(0.0, 0.0, 3, 2).unwrap();
        assert_eq!(fidelity_value(&bowen, &noise0).unwrap(), 1.0);
    }

    #[test]
    fn ea_repetition_beats_bowen_with_perfect_receiver() {
        let entry = builtin_codes().get("ea_repetition_3_1_2").unwrap();
        let reps = entry.designed_table.as_ref().unwrap();
        let view = entry.code.view();
        let table = SyndromeTable::from_representatives(&view, reps).unwrap();
        let ea = enumerate_correctable(&table).unwrap();
        assert_eq!(ea.alice_row().a, vec![1, 9, 6, 0]);
        let bowen = enumerate_correctable(&table_for("bowen_3_1_2")).unwrap();
        for p in [0.05, 0.3, 0.6, 0.9] {
            let noise = NoiseModel::new(p, 0.0, 3, 2).unwrap();
            let fe = fidelity_value(&ea, &noise).unwrap();
            let fb = fidelity_value(&bowen, &noise).unwrap();
            assert!(fe > fb, "p={p}: {fe} <= {fb}");
        }
    }

    #[test]
    fn lower_bounds_five_qubit() {
        let table = table_for("five_qubit");
        let p = 0.1;
        let noise = NoiseModel::uniform(p, 5).unwrap();
        let bounds = fidelity_lower_bounds(&table, &noise, Some(3)).unwrap();
        let q = |w: usize| (1.0f64 - 0.75 * p).powi(5 - w as i32) * (p / 4.0).powi(w as i32);
        let expected = q(0) + 15.0 * q(1);
        assert!((bounds.distance.unwrap() - expected).abs() < 1e-15);
        // representatives are the identity plus the 15 weight-one words here
        assert!((bounds.representative - expected).abs() < 1e-15);

        let noise0 = NoiseModel::uniform(0.0, 5).unwrap();
        let b0 = fidelity_lower_bounds(&table, &noise0, Some(3)).unwrap();
        assert_eq!(b0.representative, 1.0);
        assert_eq!(b0.distance, Some(1.0));
    }

    #[test]
    fn lower_bounds_below_exact() {
        for name in ["bit_flip", "four_two_two", "five_qubit", "steane"] {
            let entry = builtin_codes().get(name).unwrap();
            let Code::Standard(code) = &entry.code else { panic!() };
            let table = table_for(name);
            let e = enumerate_correctable(&table).unwrap();
            for p in [0.01, 0.05, 0.1, 0.2] {
                let noise = NoiseModel::uniform(p, code.n()).unwrap();
                let exact = fidelity_value(&e, &noise).unwrap();
                let bounds = fidelity_lower_bounds(&table, &noise, code.d).unwrap();
                assert!(bounds.representative <= exact + 1e-15, "{name} rep p={p}");
                if let Some(db) = bounds.distance {
                    assert!(db <= exact + 1e-15, "{name} dist p={p}");
                }
            }
        }
    }

    #[test]
    fn monte_carlo_edges_and_determinism() {
        let table = table_for("five_qubit");
        let noise = NoiseModel::uniform(0.0, 5).unwrap();
        let est = monte_carlo_fidelity(&table, &noise, 1000, 1).unwrap();
        assert_eq!(est.estimate, 1.0);

        let noise = NoiseModel::uniform(0.1, 5).unwrap();
        let a = monte_carlo_fidelity(&table, &noise, 5000, 42).unwrap();
        let b = monte_carlo_fidelity(&table, &noise, 5000, 42).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo_fidelity(&table, &noise, 5000, 43).unwrap();
        assert_ne!(a.successes, c.successes);
    }

    #[test]
    fn sequential_reductions() {
        let Code::Eaqec(bowen) = &builtin_codes().get("bowen_3_1_2").unwrap().code else {
            panic!()
        };
        let Code::Standard(inner) = &builtin_codes().get("four_two_two").unwrap().code else {
            panic!()
        };
        let comb = combine(bowen, inner).unwrap();

        // p_b = 0: the inner distribution is a point mass, so sequential
        // fidelity equals the outer fidelity with perfect ebits
        let noise = NoiseModel::new(0.08, 0.0, 3, 4).unwrap();
        let seq = sequential_fidelity(&comb, &noise).unwrap();
        let outer_table = SyndromeTable::build_min_weight(&bowen.extended_view()).unwrap();
        let e = enumerate_correctable(&outer_table).unwrap();
        let perfect =
            fidelity_value(&e, &NoiseModel::new(0.08, 0.0, 3, 2).unwrap()).unwrap();
        assert!((seq - perfect).abs() < 1e-12);

        // low rates: the single joint decoder beats sequential decoding
        let noise = NoiseModel::new(0.01, 0.01, 3, 4).unwrap();
        let seq = sequential_fidelity(&comb, &noise).unwrap();
        let joint_table = SyndromeTable::build_min_weight(&comb.joint_view()).unwrap();
        let je = enumerate_correctable(&joint_table).unwrap();
        let single = fidelity_value(&je, &noise).unwrap();
        assert!(single > seq, "single={single} seq={seq}");
    }

    #[test]
    fn sequential_matches_two_stage_oracle() {
        // Independent route: decode every (sender error, inner error) pair
        // through the two decoders in sequence and add up probabilities.
        let Code::Eaqec(bowen) = &builtin_codes().get("bowen_3_1_2").unwrap().code else {
            panic!()
        };
        let Code::Standard(inner) = &builtin_codes().get("four_two_two").unwrap().code else {
            panic!()
        };
        let comb = combine(bowen, inner).unwrap();
        let (pa, pb) = (0.07, 0.11);
        let noise = NoiseModel::new(pa, pb, 3, 4).unwrap();
        let seq = sequential_fidelity(&comb, &noise).unwrap();

        let inner_table = SyndromeTable::build_min_weight(&inner.view()).unwrap();
        let inner_dec = Decoder::new(inner_table).unwrap();
        let outer_table = SyndromeTable::build_min_weight(&bowen.extended_view()).unwrap();
        let outer_dec = Decoder::new(outer_table).unwrap();
        let qa = |w: usize| (1.0f64 - 0.75 * pa).powi(3 - w as i32) * (pa / 4.0).powi(w as i32);
        let qb = |w: usize| (1.0f64 - 0.75 * pb).powi(4 - w as i32) * (pb / 4.0).powi(w as i32);
        let mut total = 0.0;
        for wb in 0..=4 {
            for eb in words_of_weight(4, wb) {
                let residual_class = inner_dec.decode(&eb).unwrap().logical_class;
                let bob_word =
                    LogicalErrorDistribution::class_word(2, residual_class).embed(5, 3);
                for wa in 0..=3 {
                    for ea in words_of_weight(3, wa) {
                        let e = ea.embed(5, 0).multiply(&bob_word);
                        if outer_dec.decode(&e).unwrap().success {
                            total += qa(wa) * qb(wb);
                        }
                    }
                }
            }
        }
        assert!((seq - total).abs() < 1e-12, "seq={seq} oracle={total}");
    }

    #[test]
    fn krawtchouk_values() {
        for wp in 0..=4 {
            assert_eq!(krawtchouk(0, wp, 4), BigInt::from(1));
        }
        for (w, n) in [(1, 4), (2, 5), (3, 6)] {
            let expect = BigInt::from(3u32).pow(w as u32) * BigInt::from(big_binomial(n, w));
            assert_eq!(krawtchouk(w, 0, n), expect);
        }
        assert_eq!(krawtchouk(1, 1, 3), BigInt::from(5));
    }

    #[test]
    fn macwilliams_single_qubit() {
        let a = WeightEnumerator::new(1, vec![1, 0]);
        let b = macwilliams_transform(&a, 1).unwrap();
        assert_eq!(b.a, vec![1, 3]);
    }

    #[test]
    fn macwilliams_five_qubit_and_round_trip() {
        let a = WeightEnumerator::new(5, vec![1, 0, 0, 0, 15, 0]);
        let b = macwilliams_transform(&a, 16).unwrap();

        // brute-force enumerator of the normalizer
        let gens = builtin_codes().get("five_qubit").unwrap().code.view().generators;
        let mut brute = vec![0u64; 6];
        for w in 0..=5 {
            for word in words_of_weight(5, w) {
                if gens.iter().all(|g| g.commutes_with(&word)) {
                    brute[w] += 1;
                }
            }
        }
        assert_eq!(b.a, brute);
        assert_eq!(b.total(), 64);

        let back = macwilliams_transform(&b, 64).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn macwilliams_rejects_bad_input() {
        // declared group size disagrees with the tally
        let a = WeightEnumerator::new(2, vec![1, 1, 0]);
        assert!(matches!(macwilliams_transform(&a, 3), Err(Error::Structure(_))));
        // non-integer transform output
        let a = WeightEnumerator::new(2, vec![1, 2, 0]);
        assert!(matches!(macwilliams_transform(&a, 3), Err(Error::Structure(_))));
    }

    #[test]
    fn brute_force_oracle_small_codes() {
        // exact fidelity equals the sum of word probabilities over decode
        // successes, computed along an independent path
        for name in ["bit_flip", "four_two_two", "bowen_3_1_2"] {
            let view = builtin_codes().get(name).unwrap().code.view();
            let table = SyndromeTable::build_min_weight(&view).unwrap();
            let e = enumerate_correctable(&table).unwrap();
            let decoder = Decoder::new(table.clone()).unwrap();
            let n = view.n_total();
            for p in [0.05, 0.3, 0.9] {
                let noise = NoiseModel::new(p, p, view.n_alice, view.n_bob).unwrap();
                let exact = fidelity_value(&e, &noise).unwrap();
                let mut brute = 0.0;
                for w in 0..=n {
                    for word in words_of_weight(n, w) {
                        if decoder.decode(&word).unwrap().success {
                            brute += noise.word_prob(&word);
                        }
                    }
                }
                assert!((exact - brute).abs() < 1e-12, "{name} p={p}");
            }
        }
    }

    #[test]
    fn fidelity_at_one_is_four_to_minus_k() {
        for name in ["bit_flip", "five_qubit", "bowen_3_1_2", "steane_4_1_3"] {
            let view = builtin_codes().get(name).unwrap().code.view();
            let table = SyndromeTable::build_min_weight(&view).unwrap();
            let e = enumerate_correctable(&table).unwrap();
            let noise = NoiseModel::new(1.0, 1.0, view.n_alice, view.n_bob).unwrap();
            let got = fidelity_value(&e, &noise).unwrap();
            assert_eq!(got, 0.25f64.powi(view.k() as i32), "{name}");
        }
    }

    #[test]
    fn logical_distribution_identity_mass_is_fidelity() {
        let Code::Standard(code) = &builtin_codes().get("four_two_two").unwrap().code else {
            panic!()
        };
        let table = SyndromeTable::build_min_weight(&code.view()).unwrap();
        let dist = logical_error_distribution(code, &table, 0.1).unwrap();
        let e = enumerate_correctable(&table).unwrap();
        let noise = NoiseModel::uniform(0.1, 4).unwrap();
        let exact = fidelity_value(&e, &noise).unwrap();
        assert!((dist.identity_mass() - exact).abs() < 1e-12);
    }

    #[test]
    fn compose_rejects_mismatch() {
        let Code::Eaqec(bowen) = &builtin_codes().get("bowen_3_1_2").unwrap().code else {
            panic!()
        };
        let table = SyndromeTable::build_min_weight(&bowen.extended_view()).unwrap();
        let bad = LogicalErrorDistribution {
            k: 1,
            probs: vec![1.0, 0.0, 0.0, 0.0],
        };
        assert!(matches!(
            compose_fidelity(bowen, &table, 0.1, &bad),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn extended_ea_rep_group_differs_from_five_qubit() {
        // sanity for the comparison example: the reconstructed repetition
        // code is a genuinely different stabilizer group
        let Code::Eaqec(ea) = &builtin_codes().get("ea_repetition_3_1_2").unwrap().code else {
            panic!()
        };
        let ext = ea.extend();
        let five = builtin_codes().get("five_qubit").unwrap().code.view().generators;
        let same = ext
            .generators()
            .iter()
            .all(|g| in_group(g, &five));
        assert!(!same);
        // its designed sender-side representatives have distinct syndromes,
        // which forces some receiver letters to collide with sender words
        let mut sender = std::collections::HashSet::new();
        for q in 0..3 {
            for l in [Pauli::X, Pauli::Y, Pauli::Z] {
                let w = PauliWord::single(5, q, l);
                sender.insert(syndrome(&w, ext.generators()).unwrap());
            }
        }
        assert_eq!(sender.len(), 9);
        let mut receiver = std::collections::HashSet::new();
        for q in 3..5 {
            for l in [Pauli::X, Pauli::Y, Pauli::Z] {
                let w = PauliWord::single(5, q, l);
                receiver.insert(syndrome(&w, ext.generators()).unwrap());
            }
        }
        assert!(receiver.len() < 6 || !receiver.is_disjoint(&sender));
    }
}
