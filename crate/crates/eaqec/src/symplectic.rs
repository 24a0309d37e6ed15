//! Bit-level Pauli algebra and GF(2) linear algebra over symplectic vectors.
//!
//! A phaseless `n`-qubit Pauli is a pair of length-`n` bit arrays: the X part
//! and the Z part. Qubit `i` (0-based) occupies bit `i`; a set X bit and a
//! set Z bit on the same qubit together mean Y. Global phase is never
//! tracked: only coset membership and commutation matter for the decoding
//! and fidelity computations built on top of this module.
//!
//! Bit arrays are packed into `u64` words so that multiplication is a word
//! XOR and weight is a popcount; any `n` is supported through the multi-word
//! representation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

const WORD_BITS: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

fn get_bit(words: &[u64], i: usize) -> bool {
    words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
}

fn set_bit(words: &mut [u64], i: usize, value: bool) {
    let mask = 1u64 << (i % WORD_BITS);
    if value {
        words[i / WORD_BITS] |= mask;
    } else {
        words[i / WORD_BITS] &= !mask;
    }
}

fn xor_assign(a: &mut [u64], b: &[u64]) {
    for (ai, bi) in a.iter_mut().zip(b) {
        *ai ^= bi;
    }
}

fn and_parity(a: &[u64], b: &[u64]) -> u8 {
    let mut acc = 0u64;
    for (ai, bi) in a.iter().zip(b) {
        acc ^= ai & bi;
    }
    (acc.count_ones() & 1) as u8
}

/// Mask with bits `lo..hi` set, laid out over `words` u64 words.
fn range_mask(words: usize, lo: usize, hi: usize) -> Box<[u64]> {
    let mut m = vec![0u64; words].into_boxed_slice();
    for i in lo..hi {
        set_bit(&mut m, i, true);
    }
    m
}

/// One single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// X component bit of the letter.
    pub fn x_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Z component bit of the letter.
    pub fn z_bit(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' | 'i' => Some(Pauli::I),
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A phaseless `n`-qubit Pauli operator stored as packed X and Z bit arrays.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliWord {
    n: usize,
    x: Box<[u64]>,
    z: Box<[u64]>,
}

impl PauliWord {
    /// The identity word on `n` qubits.
    pub fn identity(n: usize) -> PauliWord {
        let w = words_for(n);
        PauliWord {
            n,
            x: vec![0; w].into_boxed_slice(),
            z: vec![0; w].into_boxed_slice(),
        }
    }

    /// A single-qubit letter at 0-based position `qubit`.
    pub fn single(n: usize, qubit: usize, letter: Pauli) -> PauliWord {
        assert!(qubit < n, "qubit {qubit} out of range for n={n}");
        let mut p = PauliWord::identity(n);
        p.set(qubit, letter);
        p
    }

    /// Number of qubits.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    pub fn x_bit(&self, qubit: usize) -> bool {
        get_bit(&self.x, qubit)
    }

    pub fn z_bit(&self, qubit: usize) -> bool {
        get_bit(&self.z, qubit)
    }

    /// The letter acting on `qubit`.
    pub fn letter(&self, qubit: usize) -> Pauli {
        match (self.x_bit(qubit), self.z_bit(qubit)) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }

    pub fn set(&mut self, qubit: usize, letter: Pauli) {
        assert!(qubit < self.n);
        set_bit(&mut self.x, qubit, letter.x_bit());
        set_bit(&mut self.z, qubit, letter.z_bit());
    }

    /// Number of qubits on which the word acts non-trivially.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(self.z.iter())
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// Weight restricted to qubit positions `lo..hi`.
    pub fn weight_in(&self, lo: usize, hi: usize) -> usize {
        debug_assert!(hi <= self.n);
        let mask = range_mask(self.x.len(), lo, hi);
        self.x
            .iter()
            .zip(self.z.iter())
            .zip(mask.iter())
            .map(|((x, z), m)| ((x | z) & m).count_ones() as usize)
            .sum()
    }

    /// Phaseless product: component-wise XOR of the X and Z parts.
    ///
    /// # Panics
    ///
    /// Panics on a qubit-count mismatch. Inputs crossing a validation
    /// boundary (parsed codes, decode arguments) are length-checked there.
    pub fn multiply(&self, other: &PauliWord) -> PauliWord {
        assert_eq!(self.n, other.n, "Pauli word length mismatch");
        let mut out = self.clone();
        out.multiply_assign(other);
        out
    }

    /// In-place phaseless product.
    pub fn multiply_assign(&mut self, other: &PauliWord) {
        assert_eq!(self.n, other.n, "Pauli word length mismatch");
        xor_assign(&mut self.x, &other.x);
        xor_assign(&mut self.z, &other.z);
    }

    /// GF(2) symplectic product: 0 iff the two words commute.
    ///
    /// Equals the parity of `x·z' + z·x'` over GF(2).
    ///
    /// # Panics
    ///
    /// Panics on a qubit-count mismatch.
    pub fn symplectic_product(&self, other: &PauliWord) -> u8 {
        assert_eq!(self.n, other.n, "Pauli word length mismatch");
        and_parity(&self.x, &other.z) ^ and_parity(&self.z, &other.x)
    }

    /// True iff the two words commute.
    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        self.symplectic_product(other) == 0
    }

    /// Keep qubits `lo..hi`, producing a word on `hi - lo` qubits.
    pub fn restrict(&self, lo: usize, hi: usize) -> PauliWord {
        let mut out = PauliWord::identity(hi - lo);
        for (j, q) in (lo..hi).enumerate() {
            out.set(j, self.letter(q));
        }
        out
    }

    /// Embed into `n_total` qubits with this word's qubit 0 at `offset`.
    pub fn embed(&self, n_total: usize, offset: usize) -> PauliWord {
        assert!(offset + self.n <= n_total);
        let mut out = PauliWord::identity(n_total);
        for q in 0..self.n {
            out.set(offset + q, self.letter(q));
        }
        out
    }

    /// Reorder qubits: output qubit `j` carries the letter of `perm[j]`.
    pub fn permute(&self, perm: &[usize]) -> PauliWord {
        assert_eq!(perm.len(), self.n);
        let mut out = PauliWord::identity(self.n);
        for (j, &q) in perm.iter().enumerate() {
            out.set(j, self.letter(q));
        }
        out
    }

    /// Canonical order: the concatenated (Z, X) bit string read as an
    /// integer, Z part most significant. This is the tie-breaking order used
    /// by the syndrome-table builders.
    pub fn zx_cmp(&self, other: &PauliWord) -> Ordering {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.z.iter().rev().zip(other.z.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        for (a, b) in self.x.iter().rev().zip(other.x.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    pub(crate) fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub(crate) fn z_words(&self) -> &[u64] {
        &self.z
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<PauliWord> {
        let letters: Vec<Pauli> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                Pauli::from_char(c).ok_or_else(|| Error::Parse(format!("bad Pauli symbol '{c}'")))
            })
            .collect::<Result<_>>()?;
        if letters.is_empty() {
            return Err(Error::Parse("empty Pauli word".into()));
        }
        let mut p = PauliWord::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set(q, l);
        }
        Ok(p)
    }
}

/// An ordered list of equal-length Pauli words, i.e. the binary matrix
/// `[H_X | H_Z]` with one word per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckMatrix {
    pub n: usize,
    pub rows: Vec<PauliWord>,
}

impl CheckMatrix {
    pub fn new(n: usize, rows: Vec<PauliWord>) -> Result<CheckMatrix> {
        for r in &rows {
            if r.len() != n {
                return Err(Error::Dimension(format!(
                    "row has {} qubits, expected {n}",
                    r.len()
                )));
            }
        }
        Ok(CheckMatrix { n, rows })
    }

    /// GF(2) rank of the rows in the 2n-bit representation.
    pub fn rank(&self) -> usize {
        let mut span = PauliSpan::new(self.n);
        for r in &self.rows {
            span.insert(r);
        }
        span.rank()
    }

    pub fn is_independent(&self) -> bool {
        self.rank() == self.rows.len()
    }
}

/// A GF(2) span of Pauli words supporting membership tests and rank queries.
///
/// Rows are kept in echelon form over the concatenated (X, Z) coordinates.
pub struct PauliSpan {
    n: usize,
    rows: Vec<PauliWord>,
    pivots: Vec<usize>,
}

impl PauliSpan {
    pub fn new(n: usize) -> PauliSpan {
        PauliSpan {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_generators(n: usize, gens: &[PauliWord]) -> PauliSpan {
        let mut s = PauliSpan::new(n);
        for g in gens {
            s.insert(g);
        }
        s
    }

    fn bit(p: &PauliWord, idx: usize) -> bool {
        if idx < p.len() {
            p.x_bit(idx)
        } else {
            p.z_bit(idx - p.len())
        }
    }

    fn reduce(&self, p: &PauliWord) -> PauliWord {
        let mut v = p.clone();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if Self::bit(&v, piv) {
                v.multiply_assign(row);
            }
        }
        v
    }

    /// Insert a word; returns true if it enlarged the span.
    pub fn insert(&mut self, p: &PauliWord) -> bool {
        assert_eq!(p.len(), self.n);
        let v = self.reduce(p);
        if v.is_identity() {
            return false;
        }
        let piv = (0..2 * self.n).find(|&i| Self::bit(&v, i)).unwrap();
        self.rows.push(v);
        self.pivots.push(piv);
        true
    }

    /// True iff `p` is a GF(2) combination of the inserted words.
    pub fn contains(&self, p: &PauliWord) -> bool {
        self.reduce(p).is_identity()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// True iff `p` lies in the group generated by `generators`.
pub fn in_group(p: &PauliWord, generators: &[PauliWord]) -> bool {
    PauliSpan::from_generators(p.len(), generators).contains(p)
}

/// All `2^m` products of `m` independent generators, in subset-index order:
/// element `i` is the product of the generators selected by the set bits of
/// `i`. The order is deterministic so streams can be partitioned by index
/// range.
pub fn group_elements(generators: &[PauliWord]) -> Result<GroupElements<'_>> {
    if !generators.is_empty() {
        let n = generators[0].len();
        for g in generators {
            if g.len() != n {
                return Err(Error::Dimension("generator length mismatch".into()));
            }
        }
        let span = PauliSpan::from_generators(n, generators);
        if span.rank() != generators.len() {
            return Err(Error::Rank(format!(
                "generators are dependent: rank {} < {}",
                span.rank(),
                generators.len()
            )));
        }
    }
    if generators.len() >= 63 {
        return Err(Error::Capability(format!(
            "cannot enumerate 2^{} group elements",
            generators.len()
        )));
    }
    Ok(GroupElements {
        generators,
        next: 0,
        total: 1u64 << generators.len(),
    })
}

pub struct GroupElements<'a> {
    generators: &'a [PauliWord],
    next: u64,
    total: u64,
}

impl Iterator for GroupElements<'_> {
    type Item = PauliWord;

    fn next(&mut self) -> Option<PauliWord> {
        if self.next == self.total {
            return None;
        }
        let idx = self.next;
        self.next += 1;
        let n = self.generators.first().map_or(0, |g| g.len());
        let mut p = PauliWord::identity(n);
        for (j, g) in self.generators.iter().enumerate() {
            if idx >> j & 1 == 1 {
                p.multiply_assign(g);
            }
        }
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for GroupElements<'_> {}

/// Result of reducing a check matrix to the paired standard form.
///
/// The reduced matrix lists the `s` symplectic row pairs first, pair `i`
/// occupying rows `2i` and `2i+1` (0-based): row `2i` carries a lone Z and
/// row `2i+1` a lone X on the moved qubit `n-s+i`; every other reduced row
/// is clear on all moved qubits. Restricted to the first `n-s` qubits, the
/// two rows of a pair anticommute and commute with everything else.
#[derive(Debug, Clone)]
pub struct StandardForm {
    /// Number of symplectic row pairs found.
    pub s: usize,
    /// Output qubit `j` holds original qubit `qubit_permutation[j]`.
    pub qubit_permutation: Vec<usize>,
    /// GF(2) row operations: reduced row `i` is the XOR of the original
    /// rows selected by `row_transform[i]`.
    pub row_transform: Vec<Vec<u64>>,
    /// The reduced matrix, in the permuted qubit order.
    pub reduced: CheckMatrix,
}

impl StandardForm {
    pub fn row_transform_bit(&self, row: usize, col: usize) -> bool {
        get_bit(&self.row_transform[row], col)
    }

    /// Re-derive the reduced matrix from the original one; used to audit the
    /// recorded row operations and qubit permutation.
    pub fn apply_to(&self, original: &CheckMatrix) -> CheckMatrix {
        let m = original.rows.len();
        let mut rows = Vec::with_capacity(m);
        for tr in &self.row_transform {
            let mut acc = PauliWord::identity(original.n);
            for (j, row) in original.rows.iter().enumerate() {
                if get_bit(tr, j) {
                    acc.multiply_assign(row);
                }
            }
            rows.push(acc.permute(&self.qubit_permutation));
        }
        CheckMatrix { n: original.n, rows }
    }

    /// The simplified pair `(g_i, h_i)`: rows `2i` and `2i+1` restricted to
    /// the unmoved qubits.
    pub fn simplified_pair(&self, i: usize) -> (PauliWord, PauliWord) {
        let keep = self.reduced.n - self.s;
        (
            self.reduced.rows[2 * i].restrict(0, keep),
            self.reduced.rows[2 * i + 1].restrict(0, keep),
        )
    }
}

/// Reduce a check matrix to the paired standard form.
///
/// The pairing is greedy and deterministic: qubit columns are scanned left
/// to right; a column is movable when the (x, z) patterns of the still
/// unpaired rows span GF(2)^2 there, and the pivot rows are the lowest-index
/// rows realizing independent patterns. Paired qubits are permuted to the
/// end in pairing order. `s` is maximal for this pivoting rule; the examples
/// in this crate's tests check it against an exhaustive search.
pub fn standard_form(matrix: &CheckMatrix) -> Result<StandardForm> {
    let n = matrix.n;
    let m = matrix.rows.len();
    if !matrix.is_independent() {
        return Err(Error::Rank("check matrix rows are dependent".into()));
    }

    let mut rows = matrix.rows.clone();
    let tw = words_for(m);
    let mut transform: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            let mut r = vec![0u64; tw];
            set_bit(&mut r, i, true);
            r
        })
        .collect();

    let mut unpaired: Vec<usize> = (0..m).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut moved: Vec<usize> = Vec::new();

    let row_xor = |rows: &mut [PauliWord], transform: &mut [Vec<u64>], dst: usize, src: usize| {
        let src_row = rows[src].clone();
        rows[dst].multiply_assign(&src_row);
        let src_tr = transform[src].clone();
        xor_assign(&mut transform[dst], &src_tr);
    };

    loop {
        let mut found = None;
        'cols: for q in 0..n {
            if moved.contains(&q) {
                continue;
            }
            let mut first: Option<(usize, (bool, bool))> = None;
            for &ri in &unpaired {
                let pat = (rows[ri].x_bit(q), rows[ri].z_bit(q));
                if pat == (false, false) {
                    continue;
                }
                match first {
                    None => first = Some((ri, pat)),
                    Some((_, fp)) if pat != fp => {
                        found = Some((q, first.unwrap(), (ri, pat)));
                        break 'cols;
                    }
                    _ => {}
                }
            }
        }
        let Some((q, mut u, mut v)) = found else { break };

        // Normalize the two pivot rows to patterns (1,0) for the X row and
        // (0,1) for the Z row at column q.
        if u.1 == (false, true) {
            std::mem::swap(&mut u, &mut v);
        }
        if u.1 == (true, true) {
            if v.1 == (false, true) {
                row_xor(&mut rows, &mut transform, u.0, v.0);
                u.1 = (true, false);
            } else {
                std::mem::swap(&mut u, &mut v);
            }
        }
        if v.1 == (true, true) {
            row_xor(&mut rows, &mut transform, v.0, u.0);
        }
        let (rh, rg) = (u.0, v.0);
        debug_assert!(rows[rh].x_bit(q) && !rows[rh].z_bit(q));
        debug_assert!(!rows[rg].x_bit(q) && rows[rg].z_bit(q));

        for ri in 0..m {
            if ri == rh || ri == rg {
                continue;
            }
            if rows[ri].x_bit(q) {
                row_xor(&mut rows, &mut transform, ri, rh);
            }
            if rows[ri].z_bit(q) {
                row_xor(&mut rows, &mut transform, ri, rg);
            }
        }
        pairs.push((rg, rh));
        moved.push(q);
        unpaired.retain(|&ri| ri != rg && ri != rh);
    }

    let s = pairs.len();
    let mut perm: Vec<usize> = (0..n).filter(|q| !moved.contains(q)).collect();
    perm.extend(moved.iter().copied());

    let mut order: Vec<usize> = Vec::with_capacity(m);
    for &(rg, rh) in &pairs {
        order.push(rg);
        order.push(rh);
    }
    order.extend(unpaired.iter().copied());

    let reduced_rows: Vec<PauliWord> = order.iter().map(|&ri| rows[ri].permute(&perm)).collect();
    let transform_rows: Vec<Vec<u64>> = order.iter().map(|&ri| transform[ri].clone()).collect();

    Ok(StandardForm {
        s,
        qubit_permutation: perm,
        row_transform: transform_rows,
        reduced: CheckMatrix {
            n,
            rows: reduced_rows,
        },
    })
}

/// Complete a set of commuting, independent generators with `k` logical
/// operator pairs `(L_X, L_Z)`.
///
/// Each returned pair anticommutes internally, commutes with every
/// generator and with both members of every other pair, and lies outside
/// the generated group. The construction is deterministic: a basis of the
/// normalizer is computed in a fixed coordinate order and reduced by
/// symplectic Gram-Schmidt.
pub fn logical_operators(generators: &[PauliWord], n: usize) -> Result<Vec<(PauliWord, PauliWord)>> {
    let m = generators.len();
    for g in generators {
        if g.len() != n {
            return Err(Error::Dimension("generator length mismatch".into()));
        }
    }
    for (i, a) in generators.iter().enumerate() {
        for b in &generators[..i] {
            if a.symplectic_product(b) != 0 {
                return Err(Error::Structure(
                    "generators do not pairwise commute".into(),
                ));
            }
        }
    }
    let gen_span = PauliSpan::from_generators(n, generators);
    if gen_span.rank() != m {
        return Err(Error::Structure("generators are dependent".into()));
    }
    let k = n - m;

    // Basis of the normalizer: kernel of v -> (sp(g_i, v))_i, computed by
    // Gaussian elimination on the m x 2n functional matrix. Variable j < n
    // is the X bit of qubit j; variable n + j is the Z bit.
    let nv = 2 * n;
    let fw = words_for(nv);
    let mut frows: Vec<Vec<u64>> = generators
        .iter()
        .map(|g| {
            let mut r = vec![0u64; fw];
            for q in 0..n {
                // sp(g, v) collects g.z against v.x and g.x against v.z
                if g.z_bit(q) {
                    set_bit(&mut r, q, true);
                }
                if g.x_bit(q) {
                    set_bit(&mut r, n + q, true);
                }
            }
            r
        })
        .collect();

    let mut pivot_of_row = Vec::with_capacity(m);
    let mut used = vec![false; m];
    for col in 0..nv {
        let Some(r) = (0..m).find(|&r| !used[r] && get_bit(&frows[r], col)) else {
            continue;
        };
        used[r] = true;
        pivot_of_row.push((r, col));
        for r2 in 0..m {
            if r2 != r && get_bit(&frows[r2], col) {
                let src = frows[r].clone();
                xor_assign(&mut frows[r2], &src);
            }
        }
        if pivot_of_row.len() == m {
            break;
        }
    }
    debug_assert_eq!(pivot_of_row.len(), m);
    let pivot_cols: Vec<usize> = pivot_of_row.iter().map(|&(_, c)| c).collect();

    let var_to_word = |bits: &dyn Fn(usize) -> bool| {
        let mut p = PauliWord::identity(n);
        for q in 0..n {
            let x = bits(q);
            let z = bits(n + q);
            p.set(
                q,
                match (x, z) {
                    (false, false) => Pauli::I,
                    (true, false) => Pauli::X,
                    (false, true) => Pauli::Z,
                    (true, true) => Pauli::Y,
                },
            );
        }
        p
    };

    // Kernel basis: one vector per free column, in column order.
    let mut coset_reps: Vec<PauliWord> = Vec::new();
    let mut quotient_span = PauliSpan::from_generators(n, generators);
    for free in 0..nv {
        if pivot_cols.contains(&free) {
            continue;
        }
        let value = |var: usize| {
            if var == free {
                return true;
            }
            pivot_of_row
                .iter()
                .any(|&(r, c)| c == var && get_bit(&frows[r], free))
        };
        let w = var_to_word(&|v| value(v));
        debug_assert!(generators.iter().all(|g| g.commutes_with(&w)));
        if quotient_span.insert(&w) {
            coset_reps.push(w);
            if coset_reps.len() == 2 * k {
                break;
            }
        }
    }
    if coset_reps.len() != 2 * k {
        return Err(Error::Structure(format!(
            "expected {} logical coset generators, found {}",
            2 * k,
            coset_reps.len()
        )));
    }

    // Symplectic Gram-Schmidt into hyperbolic pairs.
    let mut pairs = Vec::with_capacity(k);
    let mut rem = coset_reps;
    while !rem.is_empty() {
        let a = rem.remove(0);
        let bi = rem
            .iter()
            .position(|w| a.symplectic_product(w) == 1)
            .ok_or_else(|| Error::Structure("no symplectic partner found".into()))?;
        let b = rem.remove(bi);
        for w in &mut rem {
            if w.symplectic_product(&a) == 1 {
                w.multiply_assign(&b);
            }
            if w.symplectic_product(&b) == 1 {
                w.multiply_assign(&a);
            }
        }
        pairs.push((a, b));
    }
    Ok(pairs)
}
