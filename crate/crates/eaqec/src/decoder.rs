//! Syndrome-table construction and Pauli-frame decoding.
//!
//! A [`SyndromeTable`] maps every syndrome value to one representative
//! error. The min-weight builder scans Pauli words level by level in
//! increasing weight; the min-probability builder orders weight classes by
//! the exact depolarizing probability of their members instead. Within a
//! level, ties are broken canonically: the word whose concatenated
//! (Z, X) bit string is smallest wins. Table construction is sequential by
//! contract (first seen wins); finished tables are immutable and can be
//! shared across threads.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::io::Write;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::codes::{syndrome, CodeView, StabilizerCode};
use crate::symplectic::{logical_operators, Pauli, PauliWord};
use crate::{Error, Result};

/// Hard ceiling on explicit tables: `2^26` representatives.
pub const MAX_TABLE_GENERATORS: usize = 26;

/// Depolarizing rates on the sender (`p_a`, `n_alice` qubits) and receiver
/// (`p_b`, `n_bob` qubits), and the per-word probability laws they induce.
#[derive(Debug, Clone, Copy)]
pub struct NoiseModel {
    pub p_a: f64,
    pub p_b: f64,
    pub n_alice: usize,
    pub n_bob: usize,
}

impl NoiseModel {
    pub fn new(p_a: f64, p_b: f64, n_alice: usize, n_bob: usize) -> Result<NoiseModel> {
        for p in [p_a, p_b] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Structure(format!("depolarizing rate {p} not in [0, 1]")));
            }
        }
        Ok(NoiseModel {
            p_a,
            p_b,
            n_alice,
            n_bob,
        })
    }

    /// Uniform rate over all qubits of a code without a receiver split.
    pub fn uniform(p: f64, n: usize) -> Result<NoiseModel> {
        NoiseModel::new(p, 0.0, n, 0)
    }

    pub fn for_view(view: &CodeView, p_a: f64, p_b: f64) -> Result<NoiseModel> {
        NoiseModel::new(p_a, p_b, view.n_alice, view.n_bob)
    }

    /// Probability of one specific sender word of weight `w`:
    /// `(1 - 3 p_a / 4)^(n-w) (p_a / 4)^w`.
    pub fn q(&self, w: usize) -> f64 {
        per_word_prob(self.p_a, self.n_alice, w)
    }

    /// Probability of one specific receiver word of weight `w'`.
    pub fn r(&self, w: usize) -> f64 {
        per_word_prob(self.p_b, self.n_bob, w)
    }

    /// Probability of one specific word with sender weight `wa` and
    /// receiver weight `wb`.
    pub fn class_prob(&self, wa: usize, wb: usize) -> f64 {
        self.q(wa) * self.r(wb)
    }

    pub fn word_prob(&self, word: &PauliWord) -> f64 {
        let wa = word.weight_in(0, self.n_alice);
        let wb = word.weight_in(self.n_alice, self.n_alice + self.n_bob);
        self.class_prob(wa, wb)
    }

    /// Exact log-probability comparison key; avoids underflow for large n.
    /// The `w = 0` terms are dropped so that `p = 0` yields `-inf` only for
    /// classes that actually contain an error letter.
    fn log_class_prob(&self, wa: usize, wb: usize) -> f64 {
        let term = |w: usize, n: usize, p: f64| -> f64 {
            let mut t = (n - w) as f64 * (1.0 - 0.75 * p).ln();
            if w > 0 {
                t += w as f64 * (p / 4.0).ln();
            }
            t
        };
        term(wa, self.n_alice, self.p_a) + term(wb, self.n_bob, self.p_b)
    }
}

fn per_word_prob(p: f64, n: usize, w: usize) -> f64 {
    (1.0 - 0.75 * p).powi((n - w) as i32) * (p / 4.0).powi(w as i32)
}

/// How a table's representatives were chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    MinWeight,
    MinProb { p_a: f64, p_b: f64 },
    /// Representatives supplied explicitly (a designed decoder).
    Designed,
    /// Cartesian product of two sequential-decoder tables.
    Product,
}

/// A complete syndrome table: one representative per syndrome value, the
/// identity at syndrome zero.
#[derive(Debug, Clone)]
pub struct SyndromeTable {
    view: CodeView,
    strategy: Strategy,
    reps: Vec<PauliWord>,
}

impl SyndromeTable {
    /// Minimum-weight table: scan weights upward, first seen wins, ties to
    /// the canonical (Z, X)-smallest word.
    pub fn build_min_weight(view: &CodeView) -> Result<SyndromeTable> {
        let levels = weight_levels(view);
        build_table(view, levels, Strategy::MinWeight)
    }

    /// Minimum-probability table: scan weight classes in decreasing
    /// probability under `noise`. Classes with exactly equal probability
    /// and equal total weight are merged into one level, so equal sender
    /// and receiver rates reproduce the min-weight scan; zero-probability
    /// classes come last in weight order.
    pub fn build_min_prob(view: &CodeView, noise: &NoiseModel) -> Result<SyndromeTable> {
        if noise.n_alice != view.n_alice || noise.n_bob != view.n_bob {
            return Err(Error::Dimension(format!(
                "noise split {}+{} does not match code split {}+{}",
                noise.n_alice, noise.n_bob, view.n_alice, view.n_bob
            )));
        }
        let mut classes: Vec<(usize, usize)> = Vec::new();
        for wa in 0..=view.n_alice {
            for wb in 0..=view.n_bob {
                classes.push((wa, wb));
            }
        }
        classes.sort_by(|a, b| {
            let (la, lb) = (noise.log_class_prob(a.0, a.1), noise.log_class_prob(b.0, b.1));
            lb.partial_cmp(&la)
                .expect("log-probabilities are never NaN")
                .then((a.0 + a.1).cmp(&(b.0 + b.1)))
                .then(a.0.cmp(&b.0))
        });
        let mut levels: Vec<Vec<(usize, usize)>> = Vec::new();
        for class in classes {
            let merge = levels.last().is_some_and(|level| {
                let prev = level[0];
                noise.log_class_prob(prev.0, prev.1) == noise.log_class_prob(class.0, class.1)
                    && prev.0 + prev.1 == class.0 + class.1
            });
            if merge {
                levels.last_mut().unwrap().push(class);
            } else {
                levels.push(vec![class]);
            }
        }
        build_table(
            view,
            levels,
            Strategy::MinProb {
                p_a: noise.p_a,
                p_b: noise.p_b,
            },
        )
    }

    /// Build a table from an explicit representative list. The words must
    /// cover every syndrome exactly once and include the identity.
    pub fn from_representatives(view: &CodeView, words: &[PauliWord]) -> Result<SyndromeTable> {
        Self::from_words(view, words, Strategy::Designed)
    }

    fn from_words(view: &CodeView, words: &[PauliWord], strategy: Strategy) -> Result<SyndromeTable> {
        let g = check_table_size(view)?;
        let size = 1usize << g;
        if words.len() != size {
            return Err(Error::Structure(format!(
                "{} representatives for {size} syndromes",
                words.len()
            )));
        }
        let mut reps: Vec<Option<PauliWord>> = vec![None; size];
        for word in words {
            let s = syndrome(word, &view.generators)? as usize;
            if reps[s].replace(word.clone()).is_some() {
                return Err(Error::Structure(format!(
                    "two representatives share syndrome {s:0g$b}"
                )));
            }
        }
        let reps: Vec<PauliWord> = reps.into_iter().map(Option::unwrap).collect();
        if !reps[0].is_identity() {
            return Err(Error::Structure(
                "the syndrome-zero representative must be the identity".into(),
            ));
        }
        Ok(SyndromeTable {
            view: view.clone(),
            strategy,
            reps,
        })
    }

    /// Sequential-decoder product table for a combination code: the
    /// representative for the pair (outer syndrome, inner syndrome) is the
    /// outer representative with its receiver part pushed through the inner
    /// code's logical operators, times the inner representative.
    pub fn product(
        comb: &crate::codes::CombinationCode,
        outer: &SyndromeTable,
        inner: &SyndromeTable,
    ) -> Result<SyndromeTable> {
        let n = comb.outer.n();
        let c = comb.outer.c();
        let m = comb.inner.n();
        if outer.view.n_alice != n || outer.view.n_bob != c {
            return Err(Error::Dimension("outer table does not match the combination".into()));
        }
        if inner.view.n_alice != m || inner.view.n_bob != 0 {
            return Err(Error::Dimension("inner table does not match the combination".into()));
        }
        let logicals = logical_operators(comb.inner.generators(), m)?;
        let total = n + m;
        let mut words = Vec::with_capacity(outer.reps.len() * inner.reps.len());
        for ta in &outer.reps {
            let alice = ta.restrict(0, n).embed(total, 0);
            let mut bob_image = PauliWord::identity(m);
            for i in 0..c {
                let (lx, lz) = &logicals[i];
                if ta.x_bit(n + i) {
                    bob_image.multiply_assign(lx);
                }
                if ta.z_bit(n + i) {
                    bob_image.multiply_assign(lz);
                }
            }
            for tb in &inner.reps {
                let mut word = alice.clone();
                word.multiply_assign(&bob_image.multiply(tb).embed(total, n));
                words.push(word);
            }
        }
        Self::from_words(&comb.joint_view(), &words, Strategy::Product)
    }

    pub fn view(&self) -> &CodeView {
        &self.view
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn generators(&self) -> &[PauliWord] {
        &self.view.generators
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representative(&self, syndrome: u64) -> &PauliWord {
        &self.reps[syndrome as usize]
    }

    pub fn representatives(&self) -> &[PauliWord] {
        &self.reps
    }

    /// Total number of correctable errors `|T x S| = 4^{#generators}`.
    pub fn correctable_count(&self) -> u128 {
        1u128 << (2 * self.view.generators.len())
    }

    /// Histogram of representatives by (sender weight, receiver weight).
    pub fn weight_profile(&self) -> WeightProfile {
        let na = self.view.n_alice;
        let nb = self.view.n_bob;
        let mut counts = BTreeMap::new();
        for rep in &self.reps {
            let key = (rep.weight_in(0, na), rep.weight_in(na, na + nb));
            *counts.entry(key).or_insert(0u64) += 1;
        }
        WeightProfile { counts }
    }

    /// Write the table as CSV: syndrome (binary), representative, sender
    /// weight, receiver weight, and probability under `noise`.
    pub fn write_csv(&self, noise: &NoiseModel, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "syndrome,representative,weight_a,weight_b,probability")?;
        let g = self.view.generators.len();
        let na = self.view.n_alice;
        let nb = self.view.n_bob;
        for (s, rep) in self.reps.iter().enumerate() {
            writeln!(
                out,
                "{s:0g$b},{rep},{},{},{}",
                rep.weight_in(0, na),
                rep.weight_in(na, na + nb),
                format_f64(noise.word_prob(rep)),
            )?;
        }
        Ok(())
    }
}

/// Histogram over (sender weight, receiver weight).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    pub counts: BTreeMap<(usize, usize), u64>,
}

impl WeightProfile {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// The Cartesian product profile of two component tables, as realized
    /// by a pair of sequential decoders: its support is the product
    /// rectangle of the component supports.
    pub fn product(outer: &WeightProfile, inner: &WeightProfile) -> WeightProfile {
        let mut counts = BTreeMap::new();
        for (&(a1, b1), &c1) in &outer.counts {
            for (&(a2, b2), &c2) in &inner.counts {
                *counts.entry((a1 + b1, a2 + b2)).or_insert(0) += c1 * c2;
            }
        }
        WeightProfile { counts }
    }
}

/// Render a float with 17 significant digits (lossless round trip).
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn check_table_size(view: &CodeView) -> Result<usize> {
    let g = view.generators.len();
    if g > MAX_TABLE_GENERATORS {
        return Err(Error::Capability(format!(
            "explicit tables are limited to {MAX_TABLE_GENERATORS} generators, code has {g}; \
             use Monte Carlo paths instead"
        )));
    }
    Ok(g)
}

/// Min-weight levels: one level per total weight.
fn weight_levels(view: &CodeView) -> Vec<Vec<(usize, usize)>> {
    let (na, nb) = (view.n_alice, view.n_bob);
    (0..=na + nb)
        .map(|w| {
            (0..=w.min(na))
                .rev()
                .filter(|&wa| w - wa <= nb)
                .map(|wa| (wa, w - wa))
                .collect()
        })
        .collect()
}

fn build_table(
    view: &CodeView,
    levels: Vec<Vec<(usize, usize)>>,
    strategy: Strategy,
) -> Result<SyndromeTable> {
    let g = check_table_size(view)?;
    let size = 1usize << g;
    let n = view.n_total();

    // Per-qubit syndromes of the pure X and pure Z letters; any word's
    // syndrome is the XOR over its support.
    let mut qubit_synd = vec![[0u64; 2]; n];
    for (q, entry) in qubit_synd.iter_mut().enumerate() {
        entry[0] = syndrome(&PauliWord::single(n, q, Pauli::X), &view.generators)?;
        entry[1] = syndrome(&PauliWord::single(n, q, Pauli::Z), &view.generators)?;
    }
    let letter_synd = |q: usize, letter: Pauli| -> u64 {
        let mut s = 0;
        if letter.x_bit() {
            s ^= qubit_synd[q][0];
        }
        if letter.z_bit() {
            s ^= qubit_synd[q][1];
        }
        s
    };

    let mut reps: Vec<Option<PauliWord>> = vec![None; size];
    reps[0] = Some(PauliWord::identity(n));
    let mut filled = 1usize;

    let mut candidates: HashMap<u64, PauliWord> = HashMap::new();
    for level in levels {
        if filled == size {
            break;
        }
        candidates.clear();
        for (wa, wb) in level {
            scan_class(view, wa, wb, &mut |word, synd| {
                if reps[synd as usize].is_some() {
                    return;
                }
                match candidates.entry(synd) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        if word.zx_cmp(e.get()) == std::cmp::Ordering::Less {
                            e.insert(word.clone());
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(word.clone());
                    }
                }
            }, &letter_synd);
        }
        for (synd, word) in candidates.drain() {
            reps[synd as usize] = Some(word);
            filled += 1;
        }
    }
    if filled != size {
        return Err(Error::Invariant(format!(
            "table incomplete: {filled} of {size} syndromes reachable"
        )));
    }
    Ok(SyndromeTable {
        view: view.clone(),
        strategy,
        reps: reps.into_iter().map(Option::unwrap).collect(),
    })
}

/// Enumerate every word with sender weight `wa` and receiver weight `wb`,
/// reporting each word plus its syndrome.
fn scan_class(
    view: &CodeView,
    wa: usize,
    wb: usize,
    visit: &mut impl FnMut(&PauliWord, u64),
    letter_synd: &impl Fn(usize, Pauli) -> u64,
) {
    let n = view.n_total();
    let alice: Vec<usize> = (0..view.n_alice).collect();
    let bob: Vec<usize> = (view.n_alice..n).collect();
    let mut word = PauliWord::identity(n);
    for sa in Combinations::new(&alice, wa) {
        for sb in Combinations::new(&bob, wb) {
            let support: Vec<usize> = sa.iter().chain(sb.iter()).copied().collect();
            let w = support.len();
            let mut letters = vec![Pauli::X; w];
            loop {
                for (q, l) in support.iter().zip(&letters) {
                    word.set(*q, *l);
                }
                let synd = support
                    .iter()
                    .zip(&letters)
                    .fold(0u64, |s, (&q, &l)| s ^ letter_synd(q, l));
                visit(&word, synd);
                for (q, _) in support.iter().zip(&letters) {
                    word.set(*q, Pauli::I);
                }
                // advance the base-3 letter counter
                let mut pos = 0;
                loop {
                    if pos == w {
                        break;
                    }
                    letters[pos] = match letters[pos] {
                        Pauli::X => Pauli::Z,
                        Pauli::Z => Pauli::Y,
                        Pauli::Y => {
                            letters[pos] = Pauli::X;
                            pos += 1;
                            continue;
                        }
                        Pauli::I => unreachable!(),
                    };
                    break;
                }
                if pos == w {
                    break;
                }
            }
            if w == 0 {
                break;
            }
        }
    }
}

/// All words of the given total weight on `n` qubits.
pub fn words_of_weight(n: usize, w: usize) -> impl Iterator<Item = PauliWord> {
    let view = CodeView {
        generators: vec![],
        n_alice: n,
        n_bob: 0,
    };
    let mut out = Vec::new();
    scan_class(&view, w, 0, &mut |word, _| out.push(word.clone()), &|_, _| 0);
    out.into_iter()
}

/// Lexicographic k-subsets of a slice.
struct Combinations<'a> {
    items: &'a [usize],
    idx: Vec<usize>,
    first: bool,
    done: bool,
}

impl<'a> Combinations<'a> {
    fn new(items: &'a [usize], k: usize) -> Combinations<'a> {
        Combinations {
            items,
            idx: (0..k).collect(),
            first: true,
            done: k > items.len(),
        }
    }
}

impl Iterator for Combinations<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if self.first {
            self.first = false;
            return Some(self.idx.iter().map(|&i| self.items[i]).collect());
        }
        let k = self.idx.len();
        let n = self.items.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.idx[i] != i + n - k {
                break;
            }
        }
        self.idx[i] += 1;
        for j in i + 1..k {
            self.idx[j] = self.idx[j - 1] + 1;
        }
        Some(self.idx.iter().map(|&i| self.items[i]).collect())
    }
}

/// Outcome of decoding one error: whether the residual lies in the
/// stabilizer, and which logical coset it lies in otherwise (0 = identity).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub success: bool,
    pub logical_class: u64,
}

/// A decoding context: a table plus the precomputed logical operators and
/// per-syndrome residual classes that make decoding O(generators).
pub struct Decoder {
    table: SyndromeTable,
    logicals: Vec<(PauliWord, PauliWord)>,
    rep_class: Vec<u64>,
}

impl Decoder {
    pub fn new(table: SyndromeTable) -> Result<Decoder> {
        let view = &table.view;
        let n = view.n_total();
        let k = view.k();
        if 2 * k > 63 {
            return Err(Error::Capability(format!(
                "logical class index for k={k} does not fit u64"
            )));
        }
        let logicals = logical_operators(&view.generators, n)?;
        let rep_class = table
            .reps
            .iter()
            .map(|rep| class_bits(rep, &logicals))
            .collect();
        Ok(Decoder {
            table,
            logicals,
            rep_class,
        })
    }

    pub fn table(&self) -> &SyndromeTable {
        &self.table
    }

    pub fn logicals(&self) -> &[(PauliWord, PauliWord)] {
        &self.logicals
    }

    /// Decode an error word: measure the syndrome, apply the table's
    /// correction, and classify the residual. Degenerate errors (residual
    /// in the stabilizer) count as success.
    pub fn decode(&self, e: &PauliWord) -> Result<DecodeOutcome> {
        let s = syndrome(e, &self.table.view.generators)?;
        let class = self.rep_class[s as usize] ^ class_bits(e, &self.logicals);
        Ok(DecodeOutcome {
            success: class == 0,
            logical_class: class,
        })
    }
}

/// Logical coset bits of a word: bit `2i` is the symplectic product with
/// logical Z_i (an X-type action), bit `2i+1` the product with logical X_i.
fn class_bits(word: &PauliWord, logicals: &[(PauliWord, PauliWord)]) -> u64 {
    let mut cls = 0u64;
    for (i, (lx, lz)) in logicals.iter().enumerate() {
        cls |= u64::from(word.symplectic_product(lz)) << (2 * i);
        cls |= u64::from(word.symplectic_product(lx)) << (2 * i + 1);
    }
    cls
}

/// Distribution over the `4^k` logical Pauli classes left by decoding.
/// Index 0 is the identity class; entries sum to one.
#[derive(Debug, Clone)]
pub struct LogicalErrorDistribution {
    pub k: usize,
    pub probs: Vec<f64>,
}

impl LogicalErrorDistribution {
    pub fn identity_mass(&self) -> f64 {
        self.probs[0]
    }

    /// The class index as a Pauli word on `k` qubits (X bit from the even
    /// class bit, Z bit from the odd one).
    pub fn class_word(k: usize, class: u64) -> PauliWord {
        let mut p = PauliWord::identity(k);
        for i in 0..k {
            let x = class >> (2 * i) & 1 == 1;
            let z = class >> (2 * i + 1) & 1 == 1;
            p.set(
                i,
                match (x, z) {
                    (false, false) => Pauli::I,
                    (true, false) => Pauli::X,
                    (false, true) => Pauli::Z,
                    (true, true) => Pauli::Y,
                },
            );
        }
        p
    }
}

/// Exact logical error distribution of a stabilizer code under a uniform
/// depolarizing rate `p`: every one of the `4^m` errors is decoded and its
/// probability accumulated into the residual class.
///
/// Enumeration is a Gray walk over the `2m` error bits with incremental
/// syndrome, class and weight updates. Limited to `m <= 12`; use
/// [`logical_error_distribution_mc`] beyond that.
pub fn logical_error_distribution(
    code: &StabilizerCode,
    table: &SyndromeTable,
    p: f64,
) -> Result<LogicalErrorDistribution> {
    let m = code.n();
    if m > 12 {
        return Err(Error::Capability(format!(
            "exact logical distribution limited to 12 qubits, code has {m}; \
             use the Monte Carlo variant"
        )));
    }
    if table.view.generators != code.generators() {
        return Err(Error::Structure("table was built for a different code".into()));
    }
    let noise = NoiseModel::uniform(p, m)?;
    let decoder = Decoder::new(table.clone())?;
    let k = code.k();
    let mut probs = vec![0.0f64; 1 << (2 * k)];

    // Per-bit toggles: flipping the X (or Z) bit of qubit q multiplies the
    // accumulated error by X_q (or Z_q).
    let mut bit_synd = vec![0u64; 2 * m];
    let mut bit_class = vec![0u64; 2 * m];
    for q in 0..m {
        for (slot, letter) in [(2 * q, Pauli::X), (2 * q + 1, Pauli::Z)] {
            let word = PauliWord::single(m, q, letter);
            bit_synd[slot] = syndrome(&word, code.generators())?;
            bit_class[slot] = class_bits(&word, &decoder.logicals);
        }
    }
    let q_of_weight: Vec<f64> = (0..=m).map(|w| noise.q(w)).collect();

    let mut occupancy = vec![false; 2 * m];
    let (mut synd, mut class, mut weight) = (0u64, 0u64, 0usize);
    probs[(decoder.rep_class[0] ^ 0) as usize] += q_of_weight[0];
    let total = 1u128 << (2 * m);
    for i in 1..total {
        let bit = i.trailing_zeros() as usize;
        let q = bit >> 1;
        let was = occupancy[2 * q] | occupancy[2 * q + 1];
        occupancy[bit] = !occupancy[bit];
        let is = occupancy[2 * q] | occupancy[2 * q + 1];
        weight = weight + usize::from(is) - usize::from(was);
        synd ^= bit_synd[bit];
        class ^= bit_class[bit];
        let residual = decoder.rep_class[synd as usize] ^ class;
        probs[residual as usize] += q_of_weight[weight];
    }
    Ok(LogicalErrorDistribution { k, probs })
}

/// Monte Carlo fallback for [`logical_error_distribution`]: sample errors,
/// decode, and tally residual classes. Deterministic for a fixed seed.
pub fn logical_error_distribution_mc(
    code: &StabilizerCode,
    table: &SyndromeTable,
    p: f64,
    samples: u64,
    seed: u64,
) -> Result<LogicalErrorDistribution> {
    if samples == 0 {
        return Err(Error::Structure("need at least one sample".into()));
    }
    if table.view.generators != code.generators() {
        return Err(Error::Structure("table was built for a different code".into()));
    }
    let noise = NoiseModel::uniform(p, code.n())?;
    let decoder = Decoder::new(table.clone())?;
    let k = code.k();
    let mut counts = vec![0u64; 1 << (2 * k)];
    let base = ChaCha12Rng::seed_from_u64(seed);
    for i in 0..samples {
        let e = sample_error(&noise, &base, i);
        let out = decoder.decode(&e)?;
        counts[out.logical_class as usize] += 1;
    }
    Ok(LogicalErrorDistribution {
        k,
        probs: counts.iter().map(|&c| c as f64 / samples as f64).collect(),
    })
}

/// Draw sample `index` of the per-qubit depolarizing channel: a dedicated
/// counter-keyed stream per sample, so sampling is order-independent and
/// reproducible regardless of how samples are distributed over workers.
pub(crate) fn sample_error(noise: &NoiseModel, base: &ChaCha12Rng, index: u64) -> PauliWord {
    let mut rng = base.clone();
    rng.set_stream(index);
    let n = noise.n_alice + noise.n_bob;
    let mut e = PauliWord::identity(n);
    for q in 0..n {
        let p = if q < noise.n_alice { noise.p_a } else { noise.p_b };
        let u: f64 = rng.gen();
        let letter = if u < 1.0 - 0.75 * p {
            Pauli::I
        } else if u < 1.0 - 0.5 * p {
            Pauli::X
        } else if u < 1.0 - 0.25 * p {
            Pauli::Y
        } else {
            Pauli::Z
        };
        e.set(q, letter);
    }
    e
}
