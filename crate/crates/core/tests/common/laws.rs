use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use motive_calc_core::atlas::Atlas;
use motive_calc_core::dsl::{parse, print};
use motive_calc_core::{check_symmetries, normalize, MotiveExpr, NormalForm, TatePolynomial};

use super::strategies::Applied;
use super::{diamond_of, euler_of};

/// Commutativity, associativity, distributivity and unit laws of the normalizer.
pub fn semiring(
    a: &MotiveExpr,
    b: &MotiveExpr,
    c: &MotiveExpr,
    p: &TatePolynomial,
    q: &TatePolynomial,
) -> Result<(), TestCaseError> {
    let n = normalize;
    prop_assert_eq!(n(&(a.clone() + b.clone())), n(&(b.clone() + a.clone())));
    prop_assert_eq!(
        n(&((a.clone() + b.clone()) + c.clone())),
        n(&(a.clone() + (b.clone() + c.clone())))
    );
    prop_assert_eq!(n(&(a.clone() + b.clone())), &n(a) + &n(b));
    prop_assert_eq!(
        n(&(a.clone() + b.clone()).twist(p.clone())),
        n(&(a.clone().twist(p.clone()) + b.clone().twist(p.clone())))
    );
    prop_assert_eq!(
        n(&a.clone().twist(p + q)),
        &n(&a.clone().twist(p.clone())) + &n(&a.clone().twist(q.clone()))
    );
    prop_assert_eq!(
        n(&a.clone().twist(p.clone()).twist(q.clone())),
        n(&a.clone().twist(p * q))
    );
    prop_assert_eq!(
        n(&a.clone().twist(p.clone()).twist(q.clone())),
        n(&a.clone().twist(q.clone()).twist(p.clone()))
    );
    prop_assert_eq!(n(&a.clone().twist(TatePolynomial::one())), n(a));
    prop_assert_eq!(n(&a.clone().twist(p.clone())), n(a).scale(p));
    let nf = n(a);
    let back = nf.to_expr().map(|e| n(&e)).unwrap_or_default();
    prop_assert_eq!(back, nf);
    Ok(())
}

/// `print` output reparses to the same normal form.
pub fn round_trip(atlas: &Atlas, e: &MotiveExpr) -> Result<(), TestCaseError> {
    let text = print(e);
    let back = parse(&text, atlas).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
    prop_assert_eq!(normalize(&back), normalize(e), "{}", text);
    prop_assert_eq!(print(&back), text);
    Ok(())
}

pub fn exact_division(p: &TatePolynomial, d: &TatePolynomial) -> Result<(), TestCaseError> {
    let prod = p * d;
    prop_assert_eq!(
        prod.try_div_exact(d).map_err(|e| TestCaseError::fail(e.to_string()))?,
        p.clone()
    );
    prop_assert_eq!(
        prod.try_div_exact(p).ok().filter(|_| !p.is_zero()),
        (!p.is_zero()).then(|| d.clone())
    );
    Ok(())
}

/// Euler characteristics along a construction, and symmetry of every diamond.
/// Returns how many blow-ups and projective bundles were checked.
pub fn construction_laws(atlas: &Atlas, log: &[Applied]) -> Result<(usize, usize), TestCaseError> {
    let (mut blowups, mut bundles) = (0, 0);
    let chi = |e: &MotiveExpr| euler_of(atlas, e);
    for step in log {
        let out = match step {
            Applied::Bundle { base, rank, out } => {
                bundles += 1;
                prop_assert_eq!(chi(out), *rank as i64 * chi(base));
                out
            }
            Applied::Fibration { base, k, out } => {
                prop_assert_eq!(chi(out), (*k as i64 + 1) * chi(base));
                out
            }
            Applied::Product { a, b, out } => {
                prop_assert_eq!(chi(out), chi(a) * chi(b));
                out
            }
            Applied::BlowUp {
                ambient,
                center,
                codim,
                out,
            } => {
                blowups += 1;
                prop_assert_eq!(chi(out), chi(ambient) + (*codim as i64 - 1) * chi(center));
                let d = diamond_of(atlas, out);
                prop_assert_eq!(d.n(), diamond_of(atlas, ambient).n());
                out
            }
        };
        let d = diamond_of(atlas, out);
        prop_assert!(check_symmetries(&d), "asymmetric diamond for {:?}", normalize(out));
        prop_assert!(d.is_connected());
    }
    Ok((blowups, bundles))
}

/// Normal forms are keyed by sorted atom names, so rendering is deterministic.
pub fn deterministic(e: &MotiveExpr) -> Result<(), TestCaseError> {
    let a: NormalForm = normalize(e);
    prop_assert_eq!(a.to_string(), normalize(&e.clone()).to_string());
    let names: Vec<&str> = a.names().collect();
    let mut sorted = names.clone();
    sorted.sort_unstable();
    prop_assert_eq!(names, sorted);
    Ok(())
}
