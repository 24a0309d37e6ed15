//! Code data models: stabilizer codes, entanglement-assisted (EAQEC) codes,
//! combination codes, the standard-form transform that moves ancilla qubits
//! to the receiver, bound checks, and the built-in catalog.
//!
//! EAQEC codes are stored as simplified generators on the sender's `n`
//! qubits: `c` symplectic pairs `(g_i, h_i)` plus an isotropic remainder.
//! [`EaqecCode::extend`] rebuilds the `[[n+c, k]]` stabilizer code whose
//! receiver qubits carry the `Z_i` / `X_i` tails; everything downstream
//! (tables, decoding, fidelity) works on that extended view.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;

use crate::symplectic::{
    logical_operators, standard_form, CheckMatrix, Pauli, PauliSpan, PauliWord,
};
use crate::{Error, Result};

/// A standard `[[n, k]]` stabilizer code given by `n - k` commuting,
/// independent generators.
#[derive(Debug, Clone)]
pub struct StabilizerCode {
    pub name: Option<String>,
    n: usize,
    generators: Vec<PauliWord>,
    /// Declared minimum distance. Metadata only; verified against brute
    /// force for small catalog codes in the test suite.
    pub d: Option<usize>,
    /// Set when the code is known to be nondegenerate; gates the `s >= d-1`
    /// assertion of the standard-form bound.
    pub nondegenerate: bool,
}

impl StabilizerCode {
    pub fn new(n: usize, generators: Vec<PauliWord>) -> Result<StabilizerCode> {
        for g in &generators {
            if g.len() != n {
                return Err(Error::Dimension(format!(
                    "generator on {} qubits, expected {n}",
                    g.len()
                )));
            }
        }
        if generators.len() > n {
            return Err(Error::Structure(format!(
                "{} generators on {n} qubits",
                generators.len()
            )));
        }
        for (i, a) in generators.iter().enumerate() {
            for (j, b) in generators.iter().enumerate().take(i) {
                if a.symplectic_product(b) != 0 {
                    return Err(Error::Structure(format!(
                        "generators {j} and {i} anticommute"
                    )));
                }
            }
        }
        let span = PauliSpan::from_generators(n, &generators);
        if span.rank() != generators.len() {
            return Err(Error::Rank("generators are dependent".into()));
        }
        Ok(StabilizerCode {
            name: None,
            n,
            generators,
            d: None,
            nondegenerate: false,
        })
    }

    pub fn with_meta(
        mut self,
        name: &str,
        d: Option<usize>,
        nondegenerate: bool,
    ) -> StabilizerCode {
        self.name = Some(name.to_string());
        self.d = d;
        self.nondegenerate = nondegenerate;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.n - self.generators.len()
    }

    pub fn generators(&self) -> &[PauliWord] {
        &self.generators
    }

    pub fn check_matrix(&self) -> CheckMatrix {
        CheckMatrix {
            n: self.n,
            rows: self.generators.clone(),
        }
    }

    /// Decoding view: all qubits on the sender side.
    pub fn view(&self) -> CodeView {
        CodeView {
            generators: self.generators.clone(),
            n_alice: self.n,
            n_bob: 0,
        }
    }

    /// Brute-force minimum distance: the minimum weight in N(S)\S.
    ///
    /// Exponential in `n`; refuses to run above 12 qubits.
    pub fn verified_distance(&self) -> Result<Option<usize>> {
        if self.n > 12 {
            return Err(Error::Capability(format!(
                "brute-force distance limited to 12 qubits, code has {}",
                self.n
            )));
        }
        let span = PauliSpan::from_generators(self.n, &self.generators);
        for w in 1..=self.n {
            for e in crate::decoder::words_of_weight(self.n, w) {
                if span.contains(&e) {
                    continue;
                }
                if self.generators.iter().all(|g| g.commutes_with(&e)) {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    }
}

/// An `[[n, k, d; c]]` EAQEC code: `c` symplectic pairs `(g_i, h_i)` and
/// `n - k - c` isotropic generators, all on the sender's `n` qubits.
#[derive(Debug, Clone)]
pub struct EaqecCode {
    pub name: Option<String>,
    n: usize,
    pairs: Vec<(PauliWord, PauliWord)>,
    isotropic: Vec<PauliWord>,
    pub d: Option<usize>,
    pub nondegenerate: bool,
}

impl EaqecCode {
    pub fn new(
        n: usize,
        pairs: Vec<(PauliWord, PauliWord)>,
        isotropic: Vec<PauliWord>,
    ) -> Result<EaqecCode> {
        let mut all: Vec<&PauliWord> = Vec::new();
        for (g, h) in &pairs {
            all.push(g);
            all.push(h);
        }
        all.extend(isotropic.iter());
        for w in &all {
            if w.len() != n {
                return Err(Error::Dimension(format!(
                    "generator on {} qubits, expected {n}",
                    w.len()
                )));
            }
        }
        for (i, (g, h)) in pairs.iter().enumerate() {
            if g.symplectic_product(h) != 1 {
                return Err(Error::Structure(format!(
                    "symplectic pair {i} does not anticommute"
                )));
            }
            for (j, (g2, h2)) in pairs.iter().enumerate() {
                if i == j {
                    continue;
                }
                if g.symplectic_product(g2) != 0
                    || g.symplectic_product(h2) != 0
                    || h.symplectic_product(g2) != 0
                {
                    return Err(Error::Structure(format!(
                        "pairs {i} and {j} do not commute crosswise"
                    )));
                }
            }
            for (j, iso) in isotropic.iter().enumerate() {
                if g.symplectic_product(iso) != 0 || h.symplectic_product(iso) != 0 {
                    return Err(Error::Structure(format!(
                        "isotropic generator {j} does not commute with pair {i}"
                    )));
                }
            }
        }
        for (i, a) in isotropic.iter().enumerate() {
            for (j, b) in isotropic.iter().enumerate().take(i) {
                if a.symplectic_product(b) != 0 {
                    return Err(Error::Structure(format!(
                        "isotropic generators {j} and {i} anticommute"
                    )));
                }
            }
        }
        let mut span = PauliSpan::new(n);
        for w in &all {
            if !span.insert(w) {
                return Err(Error::Rank("simplified generators are dependent".into()));
            }
        }
        if all.len() > n + pairs.len() {
            return Err(Error::Structure("too many generators".into()));
        }
        Ok(EaqecCode {
            name: None,
            n,
            pairs,
            isotropic,
            d: None,
            nondegenerate: false,
        })
    }

    pub fn with_meta(mut self, name: &str, d: Option<usize>, nondegenerate: bool) -> EaqecCode {
        self.name = Some(name.to_string());
        self.d = d;
        self.nondegenerate = nondegenerate;
        self
    }

    /// Sender (Alice) qubit count.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.n - self.isotropic.len() - self.pairs.len()
    }

    /// Ebit count.
    pub fn c(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(PauliWord, PauliWord)] {
        &self.pairs
    }

    pub fn isotropic(&self) -> &[PauliWord] {
        &self.isotropic
    }

    /// Extend to the `[[n+c, k]]` stabilizer code with Bob's qubits at
    /// positions `n..n+c`: generators `g_i (x) Z_i`, `h_i (x) X_i` for each
    /// pair, then the isotropic generators padded with identity.
    pub fn extend(&self) -> StabilizerCode {
        let c = self.c();
        let total = self.n + c;
        let mut rows = Vec::with_capacity(self.n - self.k() + c);
        for (i, (g, h)) in self.pairs.iter().enumerate() {
            let mut ge = g.embed(total, 0);
            ge.set(self.n + i, Pauli::Z);
            rows.push(ge);
            let mut he = h.embed(total, 0);
            he.set(self.n + i, Pauli::X);
            rows.push(he);
        }
        for iso in &self.isotropic {
            rows.push(iso.embed(total, 0));
        }
        let code = StabilizerCode::new(total, rows).expect("extension preserves structure");
        StabilizerCode {
            name: self.name.as_ref().map(|s| format!("{s}_extended")),
            d: None,
            nondegenerate: false,
            ..code
        }
    }

    /// Decoding view of the extended code, with the sender/receiver split.
    pub fn extended_view(&self) -> CodeView {
        let ext = self.extend();
        CodeView {
            generators: ext.generators,
            n_alice: self.n,
            n_bob: self.c(),
        }
    }

    /// Brute-force minimum distance: minimum weight in N(S')\S_I over the
    /// sender's qubits.
    pub fn verified_distance(&self) -> Result<Option<usize>> {
        if self.n > 12 {
            return Err(Error::Capability(format!(
                "brute-force distance limited to 12 qubits, code has {}",
                self.n
            )));
        }
        let mut simplified: Vec<PauliWord> = Vec::new();
        for (g, h) in &self.pairs {
            simplified.push(g.clone());
            simplified.push(h.clone());
        }
        simplified.extend(self.isotropic.iter().cloned());
        let iso_span = PauliSpan::from_generators(self.n, &self.isotropic);
        for w in 1..=self.n {
            for e in crate::decoder::words_of_weight(self.n, w) {
                if iso_span.contains(&e) {
                    continue;
                }
                if simplified.iter().all(|g| g.commutes_with(&e)) {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    }
}

/// Generators plus the sender/receiver qubit split: the input taken by the
/// syndrome-table builders and fidelity routines.
#[derive(Debug, Clone)]
pub struct CodeView {
    pub generators: Vec<PauliWord>,
    pub n_alice: usize,
    pub n_bob: usize,
}

impl CodeView {
    pub fn n_total(&self) -> usize {
        self.n_alice + self.n_bob
    }

    pub fn k(&self) -> usize {
        self.n_total() - self.generators.len()
    }
}

/// Either kind of parsed or catalog code.
#[derive(Debug, Clone)]
pub enum Code {
    Standard(StabilizerCode),
    Eaqec(EaqecCode),
}

impl Code {
    pub fn name(&self) -> Option<&str> {
        match self {
            Code::Standard(c) => c.name.as_deref(),
            Code::Eaqec(c) => c.name.as_deref(),
        }
    }

    pub fn params(&self) -> String {
        match self {
            Code::Standard(c) => match c.d {
                Some(d) => format!("[[{},{},{}]]", c.n(), c.k(), d),
                None => format!("[[{},{}]]", c.n(), c.k()),
            },
            Code::Eaqec(c) => match c.d {
                Some(d) => format!("[[{},{},{};{}]]", c.n(), c.k(), d, c.c()),
                None => format!("[[{},{};{}]]", c.n(), c.k(), c.c()),
            },
        }
    }

    /// Decoding view: standard codes put every qubit on the sender side,
    /// EAQEC codes use their extended stabilizer group.
    pub fn view(&self) -> CodeView {
        match self {
            Code::Standard(c) => c.view(),
            Code::Eaqec(c) => c.extended_view(),
        }
    }
}

/// Error syndrome of `e` against an ordered generator list: bit of
/// generator 0 is the most significant.
pub fn syndrome(e: &PauliWord, generators: &[PauliWord]) -> Result<u64> {
    if generators.len() > 63 {
        return Err(Error::Capability(format!(
            "syndrome index for {} generators does not fit u64",
            generators.len()
        )));
    }
    let mut s = 0u64;
    for g in generators {
        if g.len() != e.len() {
            return Err(Error::Dimension(format!(
                "error on {} qubits, generator on {}",
                e.len(),
                g.len()
            )));
        }
        s = (s << 1) | u64::from(e.symplectic_product(g));
    }
    Ok(s)
}

/// Result of [`standard_to_eaqec`]: the derived code plus the qubit
/// permutation that makes the transform auditable. Extended qubit `j` of the
/// derived code corresponds to original qubit `qubit_permutation[j]`.
#[derive(Debug, Clone)]
pub struct EaqecTransform {
    pub code: EaqecCode,
    pub qubit_permutation: Vec<usize>,
}

/// Move `c` ancilla qubits of a standard stabilizer code to the receiver,
/// producing an `[[n-c, k, d; c]]` EAQEC code.
///
/// Runs the standard-form reduction, takes the first `c` row pairs as
/// symplectic pairs, and drops the corresponding columns. Any remaining
/// paired rows rejoin the isotropic part. Errors with a capability limit
/// when `c` exceeds the number of movable qubits.
pub fn standard_to_eaqec(code: &StabilizerCode, c: usize) -> Result<EaqecTransform> {
    let sf = standard_form(&code.check_matrix())?;
    if c > sf.s {
        return Err(Error::Capability(format!(
            "cannot move {c} ebits: only {} qubit pairs are movable",
            sf.s
        )));
    }
    let n = code.n;
    let s = sf.s;
    // Reorder so the c chosen pair qubits sit at the very end: unmoved
    // qubits, then pairs c..s, then pairs 0..c.
    let mut order: Vec<usize> = (0..n - s).collect();
    order.extend(n - s + c..n);
    order.extend(n - s..n - s + c);
    let final_perm: Vec<usize> = order.iter().map(|&j| sf.qubit_permutation[j]).collect();

    let keep = n - c;
    let mut pairs = Vec::with_capacity(c);
    let mut isotropic = Vec::new();
    let reorder = |row: &PauliWord| -> PauliWord {
        let mut out = PauliWord::identity(n);
        for (jnew, &jold) in order.iter().enumerate() {
            out.set(jnew, row.letter(jold));
        }
        out
    };
    for i in 0..s {
        let g = reorder(&sf.reduced.rows[2 * i]);
        let h = reorder(&sf.reduced.rows[2 * i + 1]);
        if i < c {
            pairs.push((g.restrict(0, keep), h.restrict(0, keep)));
        } else {
            isotropic.push(g.restrict(0, keep));
            isotropic.push(h.restrict(0, keep));
        }
    }
    for row in &sf.reduced.rows[2 * s..] {
        isotropic.push(reorder(row).restrict(0, keep));
    }
    let derived = EaqecCode::new(keep, pairs, isotropic)?;
    let derived = EaqecCode {
        name: code.name.as_ref().map(|s| format!("{s}_ea_c{c}")),
        // Theorem: the derived code corrects the same errors, so the
        // declared distance carries over.
        d: code.d,
        nondegenerate: code.nondegenerate,
        ..derived
    };
    Ok(EaqecTransform {
        code: derived,
        qubit_permutation: final_perm,
    })
}

/// Maximum number of ebits movable by [`standard_to_eaqec`], i.e. `s` from
/// the standard form.
///
/// For a declared-nondegenerate code with a declared distance this asserts
/// the bound `d - 1 <= s <= floor((n-k)/2)`; a violation would mean the
/// reduction is broken.
pub fn max_movable_ebits(code: &StabilizerCode) -> Result<usize> {
    let sf = standard_form(&code.check_matrix())?;
    let s = sf.s;
    assert!(
        s <= (code.n - code.k()) / 2,
        "standard form produced more pairs than rows allow"
    );
    if code.nondegenerate {
        if let Some(d) = code.d {
            assert!(
                s + 1 >= d,
                "nondegenerate code with d={d} must have s >= {}, got {s}",
                d - 1
            );
        }
    }
    Ok(s)
}

/// A combination code `[[n,k,d_A;c]] + [[m,c,d_B]]`: the sender's EAQEC code
/// with the receiver's ebits protected by an inner stabilizer code.
#[derive(Debug, Clone)]
pub struct CombinationCode {
    pub outer: EaqecCode,
    pub inner: StabilizerCode,
    /// The joint `[[n+m, k]]` stabilizer code, sender qubits first.
    pub joint: StabilizerCode,
}

impl CombinationCode {
    /// Decoding view of the joint code with the sender/receiver split.
    pub fn joint_view(&self) -> CodeView {
        CodeView {
            generators: self.joint.generators.clone(),
            n_alice: self.outer.n(),
            n_bob: self.inner.n(),
        }
    }
}

/// Build the combination code: pairs acquire the inner code's logical
/// representatives (`g_i (x) u_i`, `h_i (x) v_i` where `u_i`, `v_i` are the
/// logical Z and X of inner qubit `i`), isotropic generators are padded with
/// identity, and the inner stabilizer generators act on the receiver block.
pub fn combine(outer: &EaqecCode, inner: &StabilizerCode) -> Result<CombinationCode> {
    let c = outer.c();
    if inner.k() != c {
        return Err(Error::Capability(format!(
            "inner code encodes {} qubits but the outer code uses {c} ebits",
            inner.k()
        )));
    }
    let n = outer.n();
    let m = inner.n();
    let total = n + m;
    let logicals = logical_operators(&inner.generators, m)?;
    let mut rows = Vec::with_capacity(total - outer.k());
    for (i, (g, h)) in outer.pairs.iter().enumerate() {
        let (lx, lz) = &logicals[i];
        let mut ge = g.embed(total, 0);
        ge.multiply_assign(&lz.embed(total, n));
        rows.push(ge);
        let mut he = h.embed(total, 0);
        he.multiply_assign(&lx.embed(total, n));
        rows.push(he);
    }
    for iso in &outer.isotropic {
        rows.push(iso.embed(total, 0));
    }
    for g in &inner.generators {
        rows.push(g.embed(total, n));
    }
    let joint = StabilizerCode::new(total, rows)?;
    let joint = StabilizerCode {
        name: match (&outer.name, &inner.name) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            _ => None,
        },
        ..joint
    };
    Ok(CombinationCode {
        outer: outer.clone(),
        inner: inner.clone(),
        joint,
    })
}

/// One evaluated bound: left-hand side, right-hand side, and whether the
/// bound is satisfied (with equality flagged separately).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub passes: bool,
    pub equality: bool,
}

fn bound(lhs: BigUint, rhs: BigUint, lhs_le_rhs: bool) -> BoundCheck {
    let passes = if lhs_le_rhs { lhs <= rhs } else { lhs >= rhs };
    let equality = lhs == rhs;
    BoundCheck {
        lhs,
        rhs,
        passes,
        equality,
    }
}

/// Singleton and Hamming bound report for parameters `(n, k, d, c)`.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    /// `n - k >= 2(d - 1)`.
    pub singleton_std: BoundCheck,
    /// `n + c - k >= 2(d - 1)`.
    pub singleton_ea: BoundCheck,
    /// `sum_{j<=t} 3^j C(n, j) <= 2^{n-k+c}` with `t = floor((d-1)/2)`.
    pub hamming_ea: BoundCheck,
    /// Same sum over `n + c` qubits: failure rules out an equivalent
    /// `[[n+c, k, d]]` standard code.
    pub hamming_std: BoundCheck,
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    acc
}

fn hamming_sum(n: usize, t: usize) -> BigUint {
    let mut acc = BigUint::ZERO;
    let mut pow3 = BigUint::one();
    for j in 0..=t {
        acc += &pow3 * binomial(n, j);
        pow3 *= BigUint::from(3u32);
    }
    acc
}

/// Evaluate the singleton and Hamming bounds for `(n, k, d, c)`.
pub fn check_bounds(n: usize, k: usize, d: usize, c: usize) -> BoundsReport {
    assert!(d >= 1, "distance must be at least 1");
    let t = (d - 1) / 2;
    let two = BigUint::from(2u32);
    let pow2 = two.pow((n + c - k) as u32);
    BoundsReport {
        singleton_std: bound(BigUint::from(n - k), BigUint::from(2 * (d - 1)), false),
        singleton_ea: bound(BigUint::from(n + c - k), BigUint::from(2 * (d - 1)), false),
        hamming_ea: bound(hamming_sum(n, t), pow2.clone(), true),
        hamming_std: bound(hamming_sum(n + c, t), pow2, true),
    }
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |f: &mut fmt::Formatter<'_>, name: &str, b: &BoundCheck, rel: &str| {
            writeln!(
                f,
                "  {name}: {} {rel} {} -> {}{}",
                b.lhs,
                b.rhs,
                if b.passes { "pass" } else { "fail" },
                if b.equality { " (equality)" } else { "" }
            )
        };
        line(f, "singleton (standard)", &self.singleton_std, ">=")?;
        line(f, "singleton (EA)      ", &self.singleton_ea, ">=")?;
        line(f, "Hamming (EA)        ", &self.hamming_ea, "<=")?;
        line(f, "Hamming (standard)  ", &self.hamming_std, "<=")
    }
}

// ---------------------------------------------------------------------------
// Code-file format
// ---------------------------------------------------------------------------

/// Parse the code-file format: one generator per line over `I X Y Z`, an
/// optional single `|` marking the sender/receiver boundary, `#` comments,
/// blank lines ignored, and an optional header line
/// `n=<int> k=<int> c=<int> [d=<int>] [nondegenerate]`.
///
/// EAQEC inputs list the extended generators; each receiver column must
/// carry exactly one lone `X` row and one lone `Z` row (the canonical tails
/// the extension produces).
pub fn parse_code(text: &str) -> Result<Code> {
    let mut header: Option<BTreeMap<String, String>> = None;
    let mut flags: Vec<String> = Vec::new();
    let mut rows: Vec<(String, Option<usize>)> = Vec::new();

    for raw in text.lines() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.contains('=') {
            if header.is_some() || !rows.is_empty() {
                return Err(Error::Parse("unexpected header line".into()));
            }
            let mut map = BTreeMap::new();
            for tok in line.split_whitespace() {
                if let Some((key, value)) = tok.split_once('=') {
                    map.insert(key.to_string(), value.to_string());
                } else {
                    flags.push(tok.to_string());
                }
            }
            header = Some(map);
            continue;
        }
        let bar = line.find('|');
        if bar != line.rfind('|') {
            return Err(Error::Parse("more than one '|' in a generator line".into()));
        }
        let letters: String = line.chars().filter(|c| !c.is_whitespace() && *c != '|').collect();
        let bar_pos = bar.map(|b| {
            line[..b]
                .chars()
                .filter(|c| !c.is_whitespace() && *c != '|')
                .count()
        });
        rows.push((letters, bar_pos));
    }

    if rows.is_empty() {
        return Err(Error::Parse("no generator lines".into()));
    }
    let total = rows[0].0.chars().count();
    let bar_pos = rows[0].1;
    for (letters, bp) in &rows {
        if letters.chars().count() != total {
            return Err(Error::Parse("generator lines have different lengths".into()));
        }
        if *bp != bar_pos {
            return Err(Error::Parse("'|' must sit at the same position in every line".into()));
        }
    }
    let words: Vec<PauliWord> = rows
        .iter()
        .map(|(letters, _)| letters.parse())
        .collect::<Result<_>>()?;

    let header_usize = |map: &BTreeMap<String, String>, key: &str| -> Result<Option<usize>> {
        map.get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad header value {key}={v}")))
            })
            .transpose()
    };

    let (mut d, mut nondegenerate) = (None, false);
    let mut header_n = None;
    let mut header_k = None;
    let mut header_c = None;
    if let Some(map) = &header {
        for key in map.keys() {
            if !matches!(key.as_str(), "n" | "k" | "c" | "d") {
                return Err(Error::Parse(format!("unknown header key '{key}'")));
            }
        }
        header_n = header_usize(map, "n")?;
        header_k = header_usize(map, "k")?;
        header_c = header_usize(map, "c")?;
        d = header_usize(map, "d")?;
    }
    for flag in &flags {
        if flag == "nondegenerate" {
            nondegenerate = true;
        } else {
            return Err(Error::Parse(format!("unknown header flag '{flag}'")));
        }
    }

    let n_bob = match bar_pos {
        Some(b) => {
            if b == 0 || b == total {
                return Err(Error::Parse("'|' cannot sit at the edge".into()));
            }
            total - b
        }
        None => 0,
    };
    let n_alice = total - n_bob;

    let code = if n_bob == 0 {
        let k = total
            .checked_sub(words.len())
            .ok_or_else(|| Error::Structure("more generators than qubits".into()))?;
        if let Some(hn) = header_n {
            if hn != total {
                return Err(Error::Parse(format!("header n={hn} but lines have {total} qubits")));
            }
        }
        if let Some(hc) = header_c {
            if hc != 0 {
                return Err(Error::Parse("header c > 0 but no '|' in generator lines".into()));
            }
        }
        if let Some(hk) = header_k {
            if hk != k {
                return Err(Error::Parse(format!("header k={hk} but generators imply k={k}")));
            }
        }
        let mut code = StabilizerCode::new(total, words)?;
        code.d = d;
        code.nondegenerate = nondegenerate;
        Code::Standard(code)
    } else {
        // Classify rows by their receiver-side tail.
        let mut g_of: Vec<Option<PauliWord>> = vec![None; n_bob];
        let mut h_of: Vec<Option<PauliWord>> = vec![None; n_bob];
        let mut isotropic = Vec::new();
        for w in &words {
            let tail = w.restrict(n_alice, total);
            let head = w.restrict(0, n_alice);
            match tail.weight() {
                0 => isotropic.push(head),
                1 => {
                    let q = (0..n_bob).find(|&q| tail.letter(q) != Pauli::I).unwrap();
                    let slot = match tail.letter(q) {
                        Pauli::X => &mut h_of[q],
                        Pauli::Z => &mut g_of[q],
                        _ => {
                            return Err(Error::Parse(
                                "receiver tails must be lone X or Z letters".into(),
                            ))
                        }
                    };
                    if slot.replace(head).is_some() {
                        return Err(Error::Parse(format!(
                            "receiver qubit {} has two rows with the same tail",
                            q + 1
                        )));
                    }
                }
                _ => {
                    return Err(Error::Parse(
                        "receiver side of a generator must be identity or a single letter".into(),
                    ))
                }
            }
        }
        let mut pairs = Vec::with_capacity(n_bob);
        for q in 0..n_bob {
            match (g_of[q].take(), h_of[q].take()) {
                (Some(g), Some(h)) => pairs.push((g, h)),
                _ => {
                    return Err(Error::Parse(format!(
                        "receiver qubit {} needs one X-tail row and one Z-tail row",
                        q + 1
                    )))
                }
            }
        }
        let mut code = EaqecCode::new(n_alice, pairs, isotropic)?;
        if let Some(hn) = header_n {
            if hn != n_alice {
                return Err(Error::Parse(format!(
                    "header n={hn} but lines have {n_alice} sender qubits"
                )));
            }
        }
        if let Some(hc) = header_c {
            if hc != n_bob {
                return Err(Error::Parse(format!(
                    "header c={hc} but lines have {n_bob} receiver qubits"
                )));
            }
        }
        if let Some(hk) = header_k {
            if hk != code.k() {
                return Err(Error::Parse(format!(
                    "header k={hk} but generators imply k={}",
                    code.k()
                )));
            }
        }
        code.d = d;
        code.nondegenerate = nondegenerate;
        Code::Eaqec(code)
    };
    Ok(code)
}

/// Render a code in the file format accepted by [`parse_code`].
pub fn format_code(code: &Code) -> String {
    let mut out = String::new();
    match code {
        Code::Standard(c) => {
            out.push_str(&format!("n={} k={} c=0", c.n(), c.k()));
            if let Some(d) = c.d {
                out.push_str(&format!(" d={d}"));
            }
            if c.nondegenerate {
                out.push_str(" nondegenerate");
            }
            out.push('\n');
            for g in &c.generators {
                out.push_str(&g.to_string());
                out.push('\n');
            }
        }
        Code::Eaqec(c) => {
            out.push_str(&format!("n={} k={} c={}", c.n(), c.k(), c.c()));
            if let Some(d) = c.d {
                out.push_str(&format!(" d={d}"));
            }
            if c.nondegenerate {
                out.push_str(" nondegenerate");
            }
            out.push('\n');
            let ext = c.extend();
            let n = c.n();
            for g in ext.generators() {
                let row = g.to_string();
                out.push_str(&row[..n]);
                out.push('|');
                out.push_str(&row[n..]);
                out.push('\n');
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Built-in catalog
// ---------------------------------------------------------------------------

/// A catalog entry: the code plus, when the construction fixes one, the
/// designed syndrome representatives (as words on the extended code).
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub code: Code,
    pub designed_table: Option<Vec<PauliWord>>,
}

/// Named map of built-in codes; every entry passes its type invariants at
/// load time.
#[derive(Debug)]
pub struct CodeCatalog {
    entries: BTreeMap<&'static str, CatalogEntry>,
}

impl CodeCatalog {
    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &CatalogEntry)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, v))
    }
}

fn must_parse(name: &str, text: &str) -> Code {
    match parse_code(text).unwrap_or_else(|e| panic!("catalog entry {name}: {e}")) {
        Code::Standard(c) => Code::Standard(StabilizerCode {
            name: Some(name.to_string()),
            ..c
        }),
        Code::Eaqec(c) => Code::Eaqec(EaqecCode {
            name: Some(name.to_string()),
            ..c
        }),
    }
}

/// The built-in code catalog.
pub fn builtin_codes() -> &'static CodeCatalog {
    static CATALOG: OnceLock<CodeCatalog> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut entries = BTreeMap::new();
        let mut plain = |name: &'static str, text: &str| {
            entries.insert(
                name,
                CatalogEntry {
                    code: must_parse(name, text),
                    designed_table: None,
                },
            );
        };

        plain("bit_flip", "n=3 k=1 c=0 d=1 nondegenerate\nZZI\nIZZ\n");
        plain("four_two_two", "n=4 k=2 c=0 d=2 nondegenerate\nXXXX\nZZZZ\n");
        plain(
            "five_qubit",
            "n=5 k=1 c=0 d=3 nondegenerate\nXZZXI\nIXZZX\nXIXZZ\nZXIXZ\n",
        );
        plain(
            "steane",
            "n=7 k=1 c=0 d=3 nondegenerate\n\
             XXIXXII\nXXXIIXI\nXIXXIIX\nZZIZZII\nZZZIIZI\nZIZZIIZ\n",
        );
        plain(
            "shor",
            "n=9 k=1 c=0 d=3\n\
             ZZIIIIIII\nIZZIIIIII\nIIIZZIIII\nIIIIZZIII\nIIIIIIZZI\nIIIIIIIZZ\n\
             XXXXXXIII\nIIIXXXXXX\n",
        );
        plain(
            "gottesman_8_3_3",
            "n=8 k=3 c=0 d=3 nondegenerate\n\
             XXXXXXXX\nZZZZZZZZ\nIXIXYZYZ\nIXZYIXZY\nIYXZXZIY\n",
        );
        plain(
            "bowen_3_1_2",
            "n=3 k=1 c=2 d=3 nondegenerate\nXZZ|XI\nZZX|IX\nZYY|ZI\nYYZ|IZ\n",
        );
        // Steane with the receiver bar at positions 6, 5 and 4.
        plain(
            "steane_6_1_1",
            "n=6 k=1 c=1 d=3 nondegenerate\n\
             XXIXXI|I\nXXXIIX|I\nXIXXII|X\nZZIZZI|I\nZZZIIZ|I\nZIZZII|Z\n",
        );
        plain(
            "steane_5_1_2",
            "n=5 k=1 c=2 d=3 nondegenerate\n\
             XXIXX|II\nXXXII|XI\nXIXXI|IX\nZZIZZ|II\nZZZII|ZI\nZIZZI|IZ\n",
        );
        plain(
            "steane_4_1_3",
            "n=4 k=1 c=3 d=3 nondegenerate\n\
             XXIX|XII\nXXXI|IXI\nXIXX|IIX\nZZIZ|ZII\nZZZI|IZI\nZIZZ|IIZ\n",
        );

        // Codes derived from the five-qubit code by the standard-form
        // transform.
        let five = match &entries["five_qubit"].code {
            Code::Standard(c) => c.clone(),
            _ => unreachable!(),
        };
        for (name, c) in [("five_qubit_4_1_1", 1usize), ("five_qubit_3_1_2", 2)] {
            let t = standard_to_eaqec(&five, c).expect("five-qubit transform");
            entries.insert(
                name,
                CatalogEntry {
                    code: Code::Eaqec(EaqecCode {
                        name: Some(name.to_string()),
                        ..t.code
                    }),
                    designed_table: None,
                },
            );
        }

        let (ea_rep, designed) = reconstruct_ea_repetition();
        entries.insert(
            "ea_repetition_3_1_2",
            CatalogEntry {
                code: Code::Eaqec(ea_rep),
                designed_table: Some(designed),
            },
        );

        CodeCatalog { entries }
    })
}

/// The sixteen syndrome representatives the `[[3,1,3;2]]` EA repetition code
/// was designed around: the identity, all nine weight-one words on the
/// sender's qubits, and six specific weight-two sender words. All act
/// trivially on the receiver.
pub fn ea_repetition_representatives() -> Vec<PauliWord> {
    [
        "III", "XII", "IXI", "IIX", "ZII", "IZI", "IIZ", "YII", "IYI", "IIY", "XZI", "XIZ", "ZXI",
        "IXZ", "ZIX", "IZX",
    ]
    .iter()
    .map(|s| s.parse::<PauliWord>().unwrap().embed(5, 0))
    .collect()
}

/// Reconstruct the `[[3,1,3;2]]` EA repetition code by exhaustive search.
///
/// The generators are not printed in the literature we reproduce, but the
/// designed representative set and the resulting bivariate weight enumerator
/// are. The search scans all ordered tuples (g1, h1, g2, h2) of 3-qubit
/// words in canonical (Z,X) order and returns the first tuple that
///
/// 1. forms two symplectic pairs with the EAQEC commutation structure,
/// 2. gives the sixteen designed representatives distinct syndromes on the
///    extended code, and
/// 3. reproduces the designed bivariate enumerator of the correctable set.
pub fn reconstruct_ea_repetition() -> (EaqecCode, Vec<PauliWord>) {
    let reps = ea_repetition_representatives();
    let target: BTreeMap<(usize, usize), u64> = [
        ((0, 0), 1),
        ((1, 0), 9),
        ((2, 0), 6),
        ((1, 1), 18),
        ((2, 1), 38),
        ((3, 1), 40),
        ((1, 2), 18),
        ((2, 2), 55),
        ((3, 2), 71),
    ]
    .into_iter()
    .collect();

    let mut all: Vec<PauliWord> = Vec::new();
    for z in 0..8u32 {
        for x in 0..8u32 {
            let mut p = PauliWord::identity(3);
            for q in 0..3 {
                let xb = x >> q & 1 == 1;
                let zb = z >> q & 1 == 1;
                p.set(
                    q,
                    match (xb, zb) {
                        (false, false) => Pauli::I,
                        (true, false) => Pauli::X,
                        (false, true) => Pauli::Z,
                        (true, true) => Pauli::Y,
                    },
                );
            }
            if !p.is_identity() {
                all.push(p);
            }
        }
    }

    for g1 in &all {
        for h1 in &all {
            if g1.symplectic_product(h1) != 1 {
                continue;
            }
            for g2 in &all {
                if g2.symplectic_product(g1) != 0 || g2.symplectic_product(h1) != 0 {
                    continue;
                }
                for h2 in &all {
                    if h2.symplectic_product(g2) != 1
                        || h2.symplectic_product(g1) != 0
                        || h2.symplectic_product(h1) != 0
                    {
                        continue;
                    }
                    let gens = [g1.clone(), h1.clone(), g2.clone(), h2.clone()];
                    let span = PauliSpan::from_generators(3, &gens);
                    if span.rank() != 4 {
                        continue;
                    }
                    let Ok(code) = EaqecCode::new(
                        3,
                        vec![(g1.clone(), h1.clone()), (g2.clone(), h2.clone())],
                        vec![],
                    ) else {
                        continue;
                    };
                    let ext = code.extend();
                    let mut seen = std::collections::HashSet::new();
                    if !reps
                        .iter()
                        .all(|r| seen.insert(syndrome(r, ext.generators()).unwrap()))
                    {
                        continue;
                    }
                    if correctable_enumerator(&ext, &reps) == target {
                        let code = code.with_meta("ea_repetition_3_1_2", Some(3), true);
                        return (code, reps);
                    }
                }
            }
        }
    }
    unreachable!("EA repetition search space is known to contain a solution")
}

/// Bivariate weight tally of T x S for a 3+2 qubit extended code; only used
/// by the reconstruction search (the general version lives in `fidelity`).
fn correctable_enumerator(
    ext: &StabilizerCode,
    reps: &[PauliWord],
) -> BTreeMap<(usize, usize), u64> {
    let mut tally = BTreeMap::new();
    for rep in reps {
        for g in crate::symplectic::group_elements(ext.generators()).unwrap() {
            let e = rep.multiply(&g);
            let key = (e.weight_in(0, 3), e.weight_in(3, 5));
            *tally.entry(key).or_insert(0) += 1;
        }
    }
    tally
}
