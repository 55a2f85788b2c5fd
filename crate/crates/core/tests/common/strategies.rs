use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::select;

use motive_calc_core::atlas::Atlas;
use motive_calc_core::formulas::{blow_up, kunneth, p_fibration, projective_bundle};
use motive_calc_core::{dim_of, MotiveExpr, TatePolynomial};

/// Atoms of the standard atlas; all of them have Hodge diamonds.
pub const REALIZED: &[&str] = &[
    "P0", "P1", "P2", "P3", "P4", "Q5", "Q6", "Gr(2,4)", "Gr(2,5)", "K3", "Hilb2K3",
];
pub const CELLULAR: &[&str] = &["P1", "P2", "P3", "P4", "Q5", "Q6", "Gr(2,4)", "Gr(2,5)"];

pub fn small_poly() -> impl Strategy<Value = TatePolynomial> {
    vec(0u32..4, 0..5).prop_map(TatePolynomial::from_dense)
}

pub fn nonzero_poly() -> impl Strategy<Value = TatePolynomial> {
    (small_poly(), 0u32..5, 1u32..4).prop_map(|(p, k, c)| if p.is_zero() { TatePolynomial::monomial(k, c) } else { p })
}

pub fn wide_poly() -> impl Strategy<Value = TatePolynomial> {
    vec(prop_oneof![3 => 0u64..10, 1 => any::<u64>()], 0..9).prop_map(TatePolynomial::from_dense)
}

pub fn wide_nonzero_poly() -> impl Strategy<Value = TatePolynomial> {
    (wide_poly(), 1u64..1000, 0u32..6).prop_map(|(p, lead, k)| {
        let top = p.degree().map_or(k, |d| d + 1);
        p + TatePolynomial::monomial(top, lead)
    })
}

/// Trees over the standard atoms and the unknown `X`.
pub fn expr() -> impl Strategy<Value = MotiveExpr> {
    let leaf = prop_oneof![
        6 => select(REALIZED).prop_map(MotiveExpr::atom),
        1 => Just(MotiveExpr::unknown("X")),
        1 => Just(MotiveExpr::atom("Hilb2QY")),
    ];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            vec(inner.clone(), 2..5).prop_map(MotiveExpr::Sum),
            (inner, nonzero_poly()).prop_map(|(e, p)| e.twist(p)),
        ]
    })
}

/// One geometric construction step applied to a smooth projective motive.
#[derive(Debug, Clone)]
pub enum Step {
    Bundle(u32),
    Fibration(u32),
    Product(&'static str),
    BlowUp(&'static str),
}

pub fn step() -> impl Strategy<Value = Step> {
    prop_oneof![
        2 => (1u32..5).prop_map(Step::Bundle),
        1 => (0u32..3).prop_map(Step::Fibration),
        2 => select(CELLULAR).prop_map(Step::Product),
        3 => select(REALIZED).prop_map(Step::BlowUp),
    ]
}

/// A starting atom and a sequence of constructions.
pub fn construction() -> impl Strategy<Value = (&'static str, Vec<Step>)> {
    (select(REALIZED), vec(step(), 1..5))
}

/// What one step did, for checking additivity laws.
#[derive(Debug, Clone)]
pub enum Applied {
    Bundle {
        base: MotiveExpr,
        rank: u32,
        out: MotiveExpr,
    },
    Fibration {
        base: MotiveExpr,
        k: u32,
        out: MotiveExpr,
    },
    Product {
        a: MotiveExpr,
        b: MotiveExpr,
        out: MotiveExpr,
    },
    BlowUp {
        ambient: MotiveExpr,
        center: MotiveExpr,
        codim: u32,
        out: MotiveExpr,
    },
}

/// Runs the steps; blow-ups whose center would have codimension < 2 are skipped.
pub fn apply(atlas: &Atlas, start: &str, steps: &[Step]) -> (MotiveExpr, Vec<Applied>) {
    let registry = atlas.registry();
    let mut cur = MotiveExpr::atom(start);
    let mut log = Vec::new();
    for s in steps {
        match s {
            Step::Bundle(r) => {
                let out = projective_bundle(&cur, *r).unwrap();
                log.push(Applied::Bundle {
                    base: cur.clone(),
                    rank: *r,
                    out: out.clone(),
                });
                cur = out;
            }
            Step::Fibration(k) => {
                let out = p_fibration(&cur, *k);
                log.push(Applied::Fibration {
                    base: cur.clone(),
                    k: *k,
                    out: out.clone(),
                });
                cur = out;
            }
            Step::Product(c) => {
                let b = MotiveExpr::atom(*c);
                let out = kunneth(registry, &cur, &b).unwrap();
                log.push(Applied::Product {
                    a: cur.clone(),
                    b,
                    out: out.clone(),
                });
                cur = out;
            }
            Step::BlowUp(z) => {
                let center = MotiveExpr::atom(*z);
                let (n, m) = (dim_of(&cur, registry).unwrap(), dim_of(&center, registry).unwrap());
                if n < m + 2 {
                    continue;
                }
                let out = blow_up(registry, &cur, &center, n - m).unwrap();
                log.push(Applied::BlowUp {
                    ambient: cur.clone(),
                    center,
                    codim: n - m,
                    out: out.clone(),
                });
                cur = out;
            }
        }
    }
    (cur, log)
}

/// A Hodge diamond of a surface with no odd cohomology: `(h20, h11)`.
pub fn even_surface() -> impl Strategy<Value = (u64, u64)> {
    (0u64..6, 1u64..40)
}
