//! Entanglement distillation and coding-scheme comparison.
//!
//! A one-way distillation protocol built on an `[[m, c]]` stabilizer code
//! has entanglement fidelity equal to that code's channel fidelity over the
//! ebit channel, and leaves a residual logical error distribution on the
//! `c` distilled ebits. Composing that residual with an EAQEC code is the
//! same machinery as sequential decoding of a combination code, so both
//! share [`ComposeTally`]. The noiseless classical side channel of the
//! protocol is assumed throughout.

use rayon::prelude::*;

use crate::codes::{CombinationCode, EaqecCode, StabilizerCode};
use crate::decoder::{
    logical_error_distribution, LogicalErrorDistribution, NoiseModel, SyndromeTable,
};
use crate::fidelity::{
    enumerate_correctable, fidelity_value, BivariateWeightEnumerator, ComposeTally,
};
use crate::symplectic::PauliWord;
use crate::{Error, Result};

/// Entanglement fidelity of the `[[m, c]]` distillation protocol at ebit
/// channel rate `p_c`: the channel fidelity of the code under its
/// min-weight decoder.
pub fn distillation_fidelity(code: &StabilizerCode, p_c: f64) -> Result<f64> {
    let table = SyndromeTable::build_min_weight(&code.view())?;
    let e = enumerate_correctable(&table)?;
    fidelity_value(&e, &NoiseModel::uniform(p_c, code.n())?)
}

/// Residual logical error distribution on the distilled ebits; its identity
/// mass is the distillation fidelity.
pub fn residual_distribution(
    code: &StabilizerCode,
    table: &SyndromeTable,
    p_c: f64,
) -> Result<LogicalErrorDistribution> {
    logical_error_distribution(code, table, p_c)
}

/// Fidelity of distilling ebits with an `[[m, c]]` protocol at rate `p_c`
/// and then transmitting through an `[[n, k; c]]` EAQEC code at rate `p_a`,
/// with no further storage errors on the distilled ebits.
pub fn distill_then_eaqec_fidelity(
    inner: &StabilizerCode,
    outer: &EaqecCode,
    p_a: f64,
    p_c: f64,
) -> Result<f64> {
    if inner.k() != outer.c() {
        return Err(Error::Capability(format!(
            "protocol distills {} ebits but the code uses {}",
            inner.k(),
            outer.c()
        )));
    }
    let inner_table = SyndromeTable::build_min_weight(&inner.view())?;
    let dist = residual_distribution(inner, &inner_table, p_c)?;
    let outer_table = SyndromeTable::build_min_weight(&outer.extended_view())?;
    crate::fidelity::compose_fidelity(outer, &outer_table, p_a, &dist)
}

/// How the distillation channel rate binds to the sweep variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PcBinding {
    /// `p_c = p_a`, the default simplification.
    EqualPa,
    Fixed(f64),
}

/// Which syndrome table an EAQEC scheme decodes with.
#[derive(Debug, Clone)]
pub enum TableChoice {
    MinWeight,
    /// Min-probability table rebuilt for each grid point's rates.
    MinProb,
    /// An explicitly designed representative set (extended-code words).
    Designed(Vec<PauliWord>),
}

/// One coding scheme in a comparison.
#[derive(Debug, Clone)]
pub enum Scheme {
    /// A standard stabilizer code; every qubit sees the sender rate.
    Standard { code: StabilizerCode },
    /// An EAQEC code; ebits see the receiver rate, or none at all when
    /// `perfect_ebits` is set.
    Eaqec {
        code: EaqecCode,
        table: TableChoice,
        perfect_ebits: bool,
    },
    /// A combination code decoded as one joint stabilizer code.
    CombinationSingle { comb: CombinationCode },
    /// A combination code decoded by two sequential decoders.
    CombinationSequential { comb: CombinationCode },
    /// Distill ebits with `inner` at the bound rate, then run `outer` with
    /// perfect storage.
    DistillThenEaqec {
        inner: StabilizerCode,
        outer: EaqecCode,
        p_c: PcBinding,
    },
}

/// A named scheme.
#[derive(Debug, Clone)]
pub struct SchemeSpec {
    pub name: String,
    pub scheme: Scheme,
}

impl SchemeSpec {
    pub fn new(name: impl Into<String>, scheme: Scheme) -> SchemeSpec {
        SchemeSpec {
            name: name.into(),
            scheme,
        }
    }

    /// Logical qubits the scheme transports; comparison sets must agree.
    pub fn k(&self) -> usize {
        match &self.scheme {
            Scheme::Standard { code } => code.k(),
            Scheme::Eaqec { code, .. } => code.k(),
            Scheme::CombinationSingle { comb } | Scheme::CombinationSequential { comb } => {
                comb.joint.k()
            }
            Scheme::DistillThenEaqec { outer, .. } => outer.k(),
        }
    }
}

enum Prepared {
    /// Fidelity is a fixed enumerator evaluated at point-dependent rates.
    Enumerator {
        e: BivariateWeightEnumerator,
        bind: RateBind,
    },
    /// Min-probability EAQEC decoding: the table depends on the rates.
    EaqecMinProb { code: EaqecCode, perfect: bool },
    Sequential {
        inner: StabilizerCode,
        inner_table: SyndromeTable,
        tally: ComposeTally,
    },
    Distill {
        inner: StabilizerCode,
        inner_table: SyndromeTable,
        tally: ComposeTally,
        p_c: PcBinding,
    },
}

enum RateBind {
    /// All qubits at `p_a`.
    Uniform,
    /// Sender at `p_a`, receiver at `p_b`.
    Split,
    /// Sender at `p_a`, receiver noiseless.
    SplitPerfect,
}

fn prepare(spec: &SchemeSpec) -> Result<Prepared> {
    Ok(match &spec.scheme {
        Scheme::Standard { code } => Prepared::Enumerator {
            e: enumerate_correctable(&SyndromeTable::build_min_weight(&code.view())?)?,
            bind: RateBind::Uniform,
        },
        Scheme::Eaqec {
            code,
            table,
            perfect_ebits,
        } => match table {
            TableChoice::MinWeight => Prepared::Enumerator {
                e: enumerate_correctable(&SyndromeTable::build_min_weight(
                    &code.extended_view(),
                )?)?,
                bind: if *perfect_ebits {
                    RateBind::SplitPerfect
                } else {
                    RateBind::Split
                },
            },
            TableChoice::Designed(words) => Prepared::Enumerator {
                e: enumerate_correctable(&SyndromeTable::from_representatives(
                    &code.extended_view(),
                    words,
                )?)?,
                bind: if *perfect_ebits {
                    RateBind::SplitPerfect
                } else {
                    RateBind::Split
                },
            },
            TableChoice::MinProb => Prepared::EaqecMinProb {
                code: code.clone(),
                perfect: *perfect_ebits,
            },
        },
        Scheme::CombinationSingle { comb } => Prepared::Enumerator {
            e: enumerate_correctable(&SyndromeTable::build_min_weight(&comb.joint_view())?)?,
            bind: RateBind::Split,
        },
        Scheme::CombinationSequential { comb } => {
            let inner_table = SyndromeTable::build_min_weight(&comb.inner.view())?;
            let outer_table = SyndromeTable::build_min_weight(&comb.outer.extended_view())?;
            Prepared::Sequential {
                inner: comb.inner.clone(),
                inner_table,
                tally: ComposeTally::build(&comb.outer, &outer_table)?,
            }
        }
        Scheme::DistillThenEaqec { inner, outer, p_c } => {
            if inner.k() != outer.c() {
                return Err(Error::Capability(format!(
                    "scheme '{}': protocol distills {} ebits but the code uses {}",
                    spec.name,
                    inner.k(),
                    outer.c()
                )));
            }
            let inner_table = SyndromeTable::build_min_weight(&inner.view())?;
            let outer_table = SyndromeTable::build_min_weight(&outer.extended_view())?;
            Prepared::Distill {
                inner: inner.clone(),
                inner_table,
                tally: ComposeTally::build(outer, &outer_table)?,
                p_c: *p_c,
            }
        }
    })
}

fn evaluate(prepared: &Prepared, p_a: f64, p_b: f64) -> Result<f64> {
    match prepared {
        Prepared::Enumerator { e, bind } => {
            let noise = match bind {
                RateBind::Uniform => NoiseModel::new(p_a, p_a, e.n_alice, e.n_bob)?,
                RateBind::Split => NoiseModel::new(p_a, p_b, e.n_alice, e.n_bob)?,
                RateBind::SplitPerfect => NoiseModel::new(p_a, 0.0, e.n_alice, e.n_bob)?,
            };
            fidelity_value(e, &noise)
        }
        Prepared::EaqecMinProb { code, perfect } => {
            let view = code.extended_view();
            let p_b = if *perfect { 0.0 } else { p_b };
            let noise = NoiseModel::for_view(&view, p_a, p_b)?;
            let table = SyndromeTable::build_min_prob(&view, &noise)?;
            fidelity_value(&enumerate_correctable(&table)?, &noise)
        }
        Prepared::Sequential {
            inner,
            inner_table,
            tally,
        } => {
            let dist = logical_error_distribution(inner, inner_table, p_b)?;
            tally.evaluate(p_a, &dist)
        }
        Prepared::Distill {
            inner,
            inner_table,
            tally,
            p_c,
        } => {
            let rate = match p_c {
                PcBinding::EqualPa => p_a,
                PcBinding::Fixed(p) => *p,
            };
            let dist = logical_error_distribution(inner, inner_table, rate)?;
            tally.evaluate(p_a, &dist)
        }
    }
}

/// Fidelities of every scheme at one grid point.
#[derive(Debug, Clone)]
pub struct ComparisonPoint {
    pub p_a: f64,
    pub p_b: f64,
    pub fidelities: Vec<f64>,
    /// Index of the best scheme at this point.
    pub best: usize,
}

/// Result of a scheme comparison over a rate grid.
#[derive(Debug, Clone)]
pub struct SchemeComparison {
    pub scheme_names: Vec<String>,
    pub points: Vec<ComparisonPoint>,
}

impl SchemeComparison {
    /// Per-point difference `F[i] - F[j]` between two schemes.
    pub fn difference(&self, i: usize, j: usize) -> Vec<f64> {
        self.points
            .iter()
            .map(|pt| pt.fidelities[i] - pt.fidelities[j])
            .collect()
    }
}

/// Evaluate every scheme at every `(p_a, p_b)` grid point.
///
/// All schemes must transport the same number of logical qubits. Grid
/// points are evaluated in parallel; the output order is the input order.
pub fn compare_schemes(schemes: &[SchemeSpec], grid: &[(f64, f64)]) -> Result<SchemeComparison> {
    if schemes.is_empty() {
        return Err(Error::Structure("no schemes to compare".into()));
    }
    let k0 = schemes[0].k();
    for spec in schemes {
        if spec.k() != k0 {
            return Err(Error::Structure(format!(
                "scheme '{}' encodes k={}, others encode k={k0}",
                spec.name,
                spec.k()
            )));
        }
    }
    let prepared: Vec<Prepared> = schemes.iter().map(prepare).collect::<Result<_>>()?;
    let points: Vec<ComparisonPoint> = grid
        .par_iter()
        .map(|&(p_a, p_b)| -> Result<ComparisonPoint> {
            let fidelities: Vec<f64> = prepared
                .iter()
                .map(|p| evaluate(p, p_a, p_b))
                .collect::<Result<_>>()?;
            let best = fidelities
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .map(|(i, _)| i)
                .unwrap();
            Ok(ComparisonPoint {
                p_a,
                p_b,
                fidelities,
                best,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SchemeComparison {
        scheme_names: schemes.iter().map(|s| s.name.clone()).collect(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{builtin_codes, combine, Code};
    use crate::fidelity::fidelity_poly;

    fn catalog_standard(name: &str) -> StabilizerCode {
        match &builtin_codes().get(name).unwrap().code {
            Code::Standard(c) => c.clone(),
            _ => panic!(),
        }
    }

    fn catalog_eaqec(name: &str) -> EaqecCode {
        match &builtin_codes().get(name).unwrap().code {
            Code::Eaqec(c) => c.clone(),
            _ => panic!(),
        }
    }

    #[test]
    fn distillation_fidelity_is_channel_fidelity() {
        let five = catalog_standard("five_qubit");
        let table = SyndromeTable::build_min_weight(&five.view()).unwrap();
        let poly = fidelity_poly(&enumerate_correctable(&table).unwrap().univariate());
        for p in [0.0, 0.1, 0.3] {
            let f = distillation_fidelity(&five, p).unwrap();
            assert!((f - poly.eval_f64(p)).abs() < 1e-12, "p={p}");
        }
        assert_eq!(distillation_fidelity(&five, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn distillation_trivial_protocol() {
        // the identity protocol on one qubit corrects nothing: only the
        // identity error keeps the ebit intact
        let trivial = StabilizerCode::new(1, vec![]).unwrap();
        for p in [0.0, 0.2, 0.7] {
            let f = distillation_fidelity(&trivial, p).unwrap();
            assert!((f - (1.0 - 0.75 * p)).abs() < 1e-15);
        }
    }

    #[test]
    fn residual_distribution_edges() {
        let five = catalog_standard("five_qubit");
        let table = SyndromeTable::build_min_weight(&five.view()).unwrap();

        let d0 = residual_distribution(&five, &table, 0.0).unwrap();
        assert_eq!(d0.identity_mass(), 1.0);

        let d1 = residual_distribution(&five, &table, 1.0).unwrap();
        for &p in &d1.probs {
            assert!((p - 0.25).abs() < 1e-12);
        }

        let d = residual_distribution(&five, &table, 0.1).unwrap();
        let f = distillation_fidelity(&five, 0.1).unwrap();
        assert!((d.identity_mass() - f).abs() < 1e-12);
        assert!((d.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distill_then_eaqec_reductions() {
        let five = catalog_standard("five_qubit");
        let outer = catalog_eaqec("five_qubit_4_1_1");

        // p_c = 0 composes to the perfect-ebit outer fidelity
        let outer_table = SyndromeTable::build_min_weight(&outer.extended_view()).unwrap();
        let e = enumerate_correctable(&outer_table).unwrap();
        for pa in [0.02, 0.1] {
            let perfect = fidelity_value(
                &e,
                &NoiseModel::new(pa, 0.0, outer.n(), outer.c()).unwrap(),
            )
            .unwrap();
            let composed = distill_then_eaqec_fidelity(&five, &outer, pa, 0.0).unwrap();
            assert!((composed - perfect).abs() < 1e-12);

            // small p: the gap to the perfect-ebit curve is bounded by the
            // distillation failure mass
            let composed = distill_then_eaqec_fidelity(&five, &outer, pa, pa).unwrap();
            let failure = 1.0 - distillation_fidelity(&five, pa).unwrap();
            assert!((composed - perfect).abs() <= failure + 1e-12);
        }
    }

    #[test]
    fn distill_trivial_inner_is_imperfect_ebits() {
        // a do-nothing protocol on c = 1 qubits leaves plain depolarizing
        // noise on the ebit, i.e. the imperfect-ebit EAQEC fidelity
        let outer = catalog_eaqec("five_qubit_4_1_1");
        let trivial = StabilizerCode::new(1, vec![]).unwrap();
        let (pa, pc) = (0.05, 0.07);
        let composed = distill_then_eaqec_fidelity(&trivial, &outer, pa, pc).unwrap();
        let outer_table = SyndromeTable::build_min_weight(&outer.extended_view()).unwrap();
        let e = enumerate_correctable(&outer_table).unwrap();
        let direct = fidelity_value(
            &e,
            &NoiseModel::new(pa, pc, outer.n(), outer.c()).unwrap(),
        )
        .unwrap();
        assert!((composed - direct).abs() < 1e-12);
    }

    #[test]
    fn distill_rejects_mismatch() {
        let five = catalog_standard("five_qubit");
        let bowen = catalog_eaqec("bowen_3_1_2");
        assert!(matches!(
            distill_then_eaqec_fidelity(&five, &bowen, 0.1, 0.1),
            Err(Error::Capability(_))
        ));
    }

    fn bowen_vs_repetition() -> Vec<SchemeSpec> {
        let bowen = catalog_eaqec("bowen_3_1_2");
        let entry = builtin_codes().get("ea_repetition_3_1_2").unwrap();
        let Code::Eaqec(ea_rep) = entry.code.clone() else {
            panic!()
        };
        vec![
            SchemeSpec::new(
                "bowen",
                Scheme::Eaqec {
                    code: bowen,
                    table: TableChoice::MinWeight,
                    perfect_ebits: false,
                },
            ),
            SchemeSpec::new(
                "ea_repetition",
                Scheme::Eaqec {
                    code: ea_rep,
                    table: TableChoice::Designed(entry.designed_table.clone().unwrap()),
                    perfect_ebits: false,
                },
            ),
        ]
    }

    #[test]
    fn compare_single_scheme_single_point() {
        let schemes = vec![SchemeSpec::new(
            "five_qubit",
            Scheme::Standard {
                code: catalog_standard("five_qubit"),
            },
        )];
        let cmp = compare_schemes(&schemes, &[(0.1, 0.1)]).unwrap();
        assert_eq!(cmp.points.len(), 1);
        let expected = distillation_fidelity(&catalog_standard("five_qubit"), 0.1).unwrap();
        assert!((cmp.points[0].fidelities[0] - expected).abs() < 1e-12);
        assert_eq!(cmp.points[0].best, 0);
    }

    #[test]
    fn compare_all_ones_at_origin() {
        let mut schemes = bowen_vs_repetition();
        schemes.push(SchemeSpec::new(
            "five_qubit",
            Scheme::Standard {
                code: catalog_standard("five_qubit"),
            },
        ));
        let comb = combine(&catalog_eaqec("bowen_3_1_2"), &catalog_standard("four_two_two"))
            .unwrap();
        schemes.push(SchemeSpec::new(
            "bowen+[[4,2,2]] single",
            Scheme::CombinationSingle { comb: comb.clone() },
        ));
        schemes.push(SchemeSpec::new(
            "bowen+[[4,2,2]] sequential",
            Scheme::CombinationSequential { comb },
        ));
        schemes.push(SchemeSpec::new(
            "distill+[[4,1,3;1]]",
            Scheme::DistillThenEaqec {
                inner: catalog_standard("five_qubit"),
                outer: catalog_eaqec("five_qubit_4_1_1"),
                p_c: PcBinding::EqualPa,
            },
        ));
        let cmp = compare_schemes(&schemes, &[(0.0, 0.0)]).unwrap();
        for &f in &cmp.points[0].fidelities {
            assert_eq!(f, 1.0);
        }
    }

    #[test]
    fn compare_is_permutation_invariant() {
        let mut schemes = bowen_vs_repetition();
        let grid = [(0.05, 0.05), (0.3, 0.3)];
        let a = compare_schemes(&schemes, &grid).unwrap();
        schemes.reverse();
        let b = compare_schemes(&schemes, &grid).unwrap();
        for (pa, pb) in a.points.iter().zip(&b.points) {
            assert_eq!(pa.fidelities[0], pb.fidelities[1]);
            assert_eq!(pa.fidelities[1], pb.fidelities[0]);
        }
    }

    #[test]
    fn compare_bowen_vs_repetition_sign_change() {
        // along p_b = p_a the difference changes sign: the storage-aware
        // code wins at low rates, the repetition decoder at high rates
        let schemes = bowen_vs_repetition();
        let grid: Vec<(f64, f64)> = (1..=9).map(|i| (0.1 * i as f64, 0.1 * i as f64)).collect();
        let cmp = compare_schemes(&schemes, &grid).unwrap();
        let diff = cmp.difference(0, 1);
        assert!(diff[0] > 0.0, "low-rate sign: {:?}", diff);
        assert!(diff.iter().any(|&d| d < 0.0), "no sign change: {:?}", diff);
    }

    #[test]
    fn compare_rejects_mixed_k() {
        let mut schemes = bowen_vs_repetition();
        schemes.push(SchemeSpec::new(
            "four_two_two",
            Scheme::Standard {
                code: catalog_standard("four_two_two"),
            },
        ));
        assert!(matches!(
            compare_schemes(&schemes, &[(0.1, 0.1)]),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn minprob_scheme_beats_minweight_in_storage_dominated_regime() {
        let bowen = catalog_eaqec("bowen_3_1_2");
        let schemes = vec![
            SchemeSpec::new(
                "bowen minweight",
                Scheme::Eaqec {
                    code: bowen.clone(),
                    table: TableChoice::MinWeight,
                    perfect_ebits: false,
                },
            ),
            SchemeSpec::new(
                "bowen minprob",
                Scheme::Eaqec {
                    code: bowen,
                    table: TableChoice::MinProb,
                    perfect_ebits: false,
                },
            ),
        ];
        let cmp = compare_schemes(&schemes, &[(0.01, 0.3)]).unwrap();
        let [mw, mp] = cmp.points[0].fidelities[..] else {
            panic!()
        };
        assert!(mp >= mw, "minprob {mp} < minweight {mw}");
    }
}
