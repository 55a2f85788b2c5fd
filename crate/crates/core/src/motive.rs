//! Motive expressions over named atoms and their canonical normal forms.
//!
//! Atoms are opaque generators: two atoms with different names are never
//! identified. An expression is a tree of direct sums and tensor products
//! with twist polynomials; [`normalize`] flattens it into a map
//! `atom -> TatePolynomial`, and all comparisons happen on that map.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tate::TatePolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    TorsionFree,
    SmoothProjective,
    Connected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomKind {
    /// A variety whose motive is a generator.
    Known,
    /// A placeholder to be solved for, with a declared dimension.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotiveAtom {
    pub name: String,
    pub dim: u32,
    pub kind: AtomKind,
    pub tags: BTreeSet<Tag>,
    /// For cellular varieties, the class as a sum of Tate twists of a point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<TatePolynomial>,
}

impl MotiveAtom {
    pub fn new(name: impl Into<String>, dim: u32) -> Self {
        Self {
            name: name.into(),
            dim,
            kind: AtomKind::Known,
            tags: BTreeSet::new(),
            cells: None,
        }
    }

    pub fn unknown(name: impl Into<String>, dim: u32) -> Self {
        Self {
            kind: AtomKind::Unknown,
            ..Self::new(name, dim)
        }
    }

    pub fn with_tag(mut self, tag: Tag) -> Self {
        self.tags.insert(tag);
        self
    }

    pub fn with_cells(mut self, cells: TatePolynomial) -> Self {
        self.cells = Some(cells);
        self
    }

    pub fn has_tag(&self, tag: Tag) -> bool {
        self.tags.contains(&tag)
    }
}

/// Append-only table of atoms. Reads are concurrent, registration is exclusive.
#[derive(Debug, Default)]
pub struct Registry {
    atoms: RwLock<BTreeMap<String, Arc<MotiveAtom>>>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&self, atom: MotiveAtom) -> Result<Arc<MotiveAtom>> {
        let mut atoms = self.atoms.write().expect("registry lock poisoned");
        if atoms.contains_key(&atom.name) {
            return Err(Error::DuplicateAtom(atom.name));
        }
        let atom = Arc::new(atom);
        atoms.insert(atom.name.clone(), Arc::clone(&atom));
        Ok(atom)
    }

    /// Registers `atom` unless an atom of the same name exists, in which case
    /// the existing one must agree on dimension and kind.
    pub fn ensure(&self, atom: MotiveAtom) -> Result<Arc<MotiveAtom>> {
        let mut atoms = self.atoms.write().expect("registry lock poisoned");
        if let Some(existing) = atoms.get(&atom.name) {
            if existing.dim != atom.dim || existing.kind != atom.kind {
                return Err(Error::DuplicateAtom(atom.name));
            }
            return Ok(Arc::clone(existing));
        }
        let atom = Arc::new(atom);
        atoms.insert(atom.name.clone(), Arc::clone(&atom));
        Ok(atom)
    }

    pub fn get(&self, name: &str) -> Option<Arc<MotiveAtom>> {
        self.atoms.read().expect("registry lock poisoned").get(name).cloned()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.atoms.read().expect("registry lock poisoned").contains_key(name)
    }

    pub fn names(&self) -> Vec<String> {
        self.atoms
            .read()
            .expect("registry lock poisoned")
            .keys()
            .cloned()
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MotiveExpr {
    Atom(String),
    /// Nonempty direct sum.
    Sum(Vec<MotiveExpr>),
    /// Tensor product with a nonzero twist polynomial.
    TensorTwist(Box<MotiveExpr>, TatePolynomial),
    Unknown(String),
}

impl MotiveExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        Self::Atom(name.into())
    }

    pub fn unknown(name: impl Into<String>) -> Self {
        Self::Unknown(name.into())
    }

    /// # Panics
    /// If `items` is empty.
    pub fn sum(items: Vec<MotiveExpr>) -> Self {
        assert!(!items.is_empty(), "direct sum of nothing");
        Self::Sum(items)
    }

    /// # Panics
    /// If `factor` is zero.
    pub fn twist(self, factor: TatePolynomial) -> Self {
        assert!(!factor.is_zero(), "tensor with the zero polynomial");
        Self::TensorTwist(Box::new(self), factor)
    }

    /// Replaces every `Unknown(name)` by `replacement`.
    pub fn substitute(&self, name: &str, replacement: &MotiveExpr) -> MotiveExpr {
        match self {
            Self::Unknown(n) if n == name => replacement.clone(),
            Self::Atom(_) | Self::Unknown(_) => self.clone(),
            Self::Sum(items) => Self::Sum(items.iter().map(|e| e.substitute(name, replacement)).collect()),
            Self::TensorTwist(inner, p) => Self::TensorTwist(Box::new(inner.substitute(name, replacement)), p.clone()),
        }
    }

    /// Names of atoms and unknowns, in first-occurrence order without repeats.
    pub fn names(&self) -> Vec<&str> {
        fn walk<'a>(e: &'a MotiveExpr, out: &mut Vec<&'a str>) {
            match e {
                MotiveExpr::Atom(n) | MotiveExpr::Unknown(n) => {
                    if !out.contains(&n.as_str()) {
                        out.push(n);
                    }
                }
                MotiveExpr::Sum(items) => items.iter().for_each(|i| walk(i, out)),
                MotiveExpr::TensorTwist(inner, _) => walk(inner, out),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn has_unknowns(&self) -> bool {
        match self {
            Self::Unknown(_) => true,
            Self::Atom(_) => false,
            Self::Sum(items) => items.iter().any(Self::has_unknowns),
            Self::TensorTwist(inner, _) => inner.has_unknowns(),
        }
    }
}

impl Add for MotiveExpr {
    type Output = MotiveExpr;

    fn add(self, rhs: MotiveExpr) -> MotiveExpr {
        match self {
            MotiveExpr::Sum(mut items) => {
                items.push(rhs);
                MotiveExpr::Sum(items)
            }
            lhs => MotiveExpr::Sum(vec![lhs, rhs]),
        }
    }
}

/// Canonical form: name -> twist multiplicity. Zero polynomials are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalForm {
    terms: BTreeMap<String, TatePolynomial>,
}

impl NormalForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(name: impl Into<String>, poly: TatePolynomial) -> Self {
        let mut nf = Self::new();
        nf.add_term(name, &poly);
        nf
    }

    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = (S, TatePolynomial)>,
        S: Into<String>,
    {
        let mut nf = Self::new();
        for (name, p) in terms {
            nf.add_term(name, &p);
        }
        nf
    }

    pub fn add_term(&mut self, name: impl Into<String>, poly: &TatePolynomial) {
        if poly.is_zero() {
            return;
        }
        *self.terms.entry(name.into()).or_default() += poly;
    }

    pub fn get(&self, name: &str) -> Option<&TatePolynomial> {
        self.terms.get(name)
    }

    /// Coefficient of `name`, zero when absent.
    pub fn coeff(&self, name: &str) -> TatePolynomial {
        self.terms.get(name).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &TatePolynomial)> {
        self.terms.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, factor: &TatePolynomial) -> NormalForm {
        let mut out = NormalForm::new();
        for (name, p) in self.iter() {
            out.add_term(name, &(p * factor));
        }
        out
    }

    /// Removes `name` and returns the rest alongside its coefficient.
    pub fn split_off(&self, name: &str) -> (TatePolynomial, NormalForm) {
        let mut rest = self.clone();
        let coeff = rest.terms.remove(name).unwrap_or_default();
        (coeff, rest)
    }

    /// Back to an expression tree: `Sum[name * coeff, ...]`.
    pub fn to_expr(&self) -> Option<MotiveExpr> {
        self.to_expr_with(|name| MotiveExpr::Atom(name.to_owned()))
    }

    pub fn to_expr_with(&self, mut leaf: impl FnMut(&str) -> MotiveExpr) -> Option<MotiveExpr> {
        let mut items: Vec<MotiveExpr> = self
            .iter()
            .map(|(name, p)| {
                let base = leaf(name);
                if p.is_one() {
                    base
                } else {
                    base.twist(p.clone())
                }
            })
            .collect();
        match items.len() {
            0 => None,
            1 => items.pop(),
            _ => Some(MotiveExpr::Sum(items)),
        }
    }

    /// Renders as DSL text, e.g. `Q6 + K3*L^2`, with atoms renamed by `display`.
    pub fn render_with(&self, display: impl Fn(&str) -> String) -> String {
        if self.is_empty() {
            return "0".to_owned();
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(name, p)| {
                let shown = display(name);
                let single_monomial = p.terms().count() == 1 && p.terms().all(|(_, c)| c == &1u32.into());
                if p.is_one() {
                    shown
                } else if single_monomial {
                    format!("{shown}*{p}")
                } else {
                    format!("{shown}*({p})")
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("normal form serializes")
    }
}

impl Add for &NormalForm {
    type Output = NormalForm;

    fn add(self, rhs: &NormalForm) -> NormalForm {
        let mut out = self.clone();
        for (name, p) in rhs.iter() {
            out.add_term(name, p);
        }
        out
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(str::to_owned))
    }
}

pub fn normalize(e: &MotiveExpr) -> NormalForm {
    match e {
        MotiveExpr::Atom(name) | MotiveExpr::Unknown(name) => NormalForm::single(name.clone(), TatePolynomial::one()),
        MotiveExpr::Sum(items) => items
            .iter()
            .fold(NormalForm::new(), |acc, item| &acc + &normalize(item)),
        MotiveExpr::TensorTwist(inner, p) => normalize(inner).scale(p),
    }
}

pub fn equal(a: &MotiveExpr, b: &MotiveExpr) -> bool {
    normalize(a) == normalize(b)
}

/// The `r` with `r + part == total`, atom by atom.
pub fn subtract_summand(total: &NormalForm, part: &NormalForm) -> Result<NormalForm> {
    let mut out = total.clone();
    for (name, p) in part.iter() {
        let have = total.coeff(name);
        let rest = have.checked_sub(p).ok_or_else(|| Error::NotASummand {
            atom: name.to_owned(),
            part: p.to_string(),
            total: have.to_string(),
        })?;
        if rest.is_zero() {
            out.terms.remove(name);
        } else {
            out.terms.insert(name.to_owned(), rest);
        }
    }
    Ok(out)
}

/// Result of a formal cancellation, with the assumption under which it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub unknown: String,
    pub value: NormalForm,
    pub provenance: String,
}

/// Solves `unknown * m1 + m2 = rhs` for the unknown, at the level of normal forms.
///
/// Atoms are treated as independent generators, so the cancellation of `m2`
/// and division by `m1` are exact statements about decompositions. They are
/// not claims about isomorphisms of the underlying motives; they hold for any
/// realization in which `m1` and `m2` can be cancelled.
pub fn solve_tensor_factor(unknown: &str, m1: &TatePolynomial, m2: &NormalForm, rhs: &NormalForm) -> Result<Solution> {
    if m1.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let rest = subtract_summand(rhs, m2)?;
    let mut value = NormalForm::new();
    for (name, p) in rest.iter() {
        value.add_term(name, &p.try_div_exact(m1)?);
    }
    let provenance = format!(
        "formal normal-form cancellation: {unknown} * ({m1}) + M2 = RHS solved by removing M2 and dividing \
         each atom coefficient by {m1}; atoms are treated as independent generators. This is valid in any \
         realization where the summand M2 cancels and the factor is not a zero divisor; it does not assert \
         an isomorphism of Chow motives."
    );
    Ok(Solution {
        unknown: unknown.to_owned(),
        value,
        provenance,
    })
}

/// Top weight: `dim(A * L^k) = dim(A) + k`, a sum takes the max.
pub fn dim_of(e: &MotiveExpr, registry: &Registry) -> Result<u32> {
    match e {
        MotiveExpr::Atom(name) => match registry.get(name) {
            Some(atom) if atom.kind == AtomKind::Known => Ok(atom.dim),
            _ => Err(Error::UnregisteredAtom(name.clone())),
        },
        MotiveExpr::Unknown(name) => match registry.get(name) {
            Some(atom) if atom.kind == AtomKind::Unknown => Ok(atom.dim),
            _ => Err(Error::UnresolvedUnknown(name.clone())),
        },
        MotiveExpr::Sum(items) => items
            .iter()
            .try_fold(0, |acc, item| Ok(acc.max(dim_of(item, registry)?))),
        MotiveExpr::TensorTwist(inner, p) => Ok(dim_of(inner, registry)? + p.degree().unwrap_or(0)),
    }
}

/// Dimension of a normal form, looking every name up in `registry`.
pub fn dim_of_normal_form(nf: &NormalForm, registry: &Registry) -> Result<u32> {
    nf.iter().try_fold(0, |acc, (name, p)| {
        let atom = registry
            .get(name)
            .ok_or_else(|| Error::UnregisteredAtom(name.to_owned()))?;
        Ok(acc.max(atom.dim + p.degree().unwrap_or(0)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[u32]) -> TatePolynomial {
        TatePolynomial::from_dense(c.iter().copied())
    }

    fn a(name: &str) -> MotiveExpr {
        MotiveExpr::atom(name)
    }

    #[test]
    fn normalize_distributes() {
        let e = a("B").twist(p(&[1, 1])) + a("B").twist(TatePolynomial::lefschetz(2));
        assert_eq!(normalize(&e), NormalForm::single("B", p(&[1, 1, 1])));
    }

    #[test]
    fn normalize_with_unknown() {
        let m1 = p(&[1, 2, 2, 2, 1]);
        let m2 = p(&[0, 1, 3, 5, 5, 3, 1]);
        let e = MotiveExpr::unknown("X").twist(m1.clone()) + a("Hilb").twist(m2.clone());
        assert_eq!(normalize(&e), NormalForm::from_terms([("X", m1), ("Hilb", m2)]));
    }

    #[test]
    fn equality_examples() {
        let lhs = a("A").twist(p(&[1, 1]));
        let rhs = a("A") + a("A").twist(TatePolynomial::lefschetz(1));
        assert!(equal(&lhs, &rhs));
        assert!(!equal(&a("B"), &a("Y")));
    }

    #[test]
    fn subtract_examples() {
        let total = NormalForm::from_terms([("B", p(&[1, 2])), ("Hilb", p(&[0, 1]))]);
        let part = NormalForm::single("Hilb", p(&[0, 1]));
        assert_eq!(
            subtract_summand(&total, &part).unwrap(),
            NormalForm::single("B", p(&[1, 2]))
        );
        assert!(subtract_summand(&total, &total).unwrap().is_empty());
        let err = subtract_summand(&NormalForm::single("B", p(&[1])), &NormalForm::single("B", p(&[1, 1])));
        assert!(matches!(err, Err(Error::NotASummand { .. })));
        // Atom absent from total entirely.
        assert!(subtract_summand(&NormalForm::new(), &NormalForm::single("Z", p(&[1]))).is_err());
    }

    #[test]
    fn solve_examples() {
        let sol = solve_tensor_factor(
            "X",
            &TatePolynomial::one(),
            &NormalForm::new(),
            &NormalForm::single("A", TatePolynomial::lefschetz(1)),
        )
        .unwrap();
        assert_eq!(sol.value, NormalForm::single("A", TatePolynomial::lefschetz(1)));
        assert!(sol.provenance.contains("does not assert"));

        let err = solve_tensor_factor(
            "X",
            &p(&[1, 1]),
            &NormalForm::new(),
            &NormalForm::single("A", p(&[1, 0, 1])),
        );
        assert!(matches!(err, Err(Error::NotDivisible { .. })));
        assert_eq!(
            solve_tensor_factor("X", &TatePolynomial::zero(), &NormalForm::new(), &NormalForm::new()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn dim_examples() {
        let reg = Registry::new();
        reg.register(MotiveAtom::new("B", 6)).unwrap();
        reg.register(MotiveAtom::new("pt", 0)).unwrap();
        reg.register(MotiveAtom::new("Hilb", 3)).unwrap();
        reg.register(MotiveAtom::unknown("X", 6)).unwrap();
        assert_eq!(dim_of(&a("B").twist(TatePolynomial::lefschetz(4)), &reg).unwrap(), 10);
        assert_eq!(dim_of(&a("pt"), &reg).unwrap(), 0);
        assert_eq!(dim_of(&a("Hilb").twist(p(&[1, 1])), &reg).unwrap(), 4);
        assert_eq!(dim_of(&MotiveExpr::unknown("X"), &reg).unwrap(), 6);
        assert_eq!(dim_of(&a("nope"), &reg), Err(Error::UnregisteredAtom("nope".into())));
        assert_eq!(
            dim_of(&MotiveExpr::unknown("B"), &reg),
            Err(Error::UnresolvedUnknown("B".into()))
        );
    }

    #[test]
    fn registry_is_append_only() {
        let reg = Registry::new();
        reg.register(MotiveAtom::new("B", 6)).unwrap();
        assert_eq!(
            reg.register(MotiveAtom::new("B", 6)),
            Err(Error::DuplicateAtom("B".into()))
        );
        assert!(reg.ensure(MotiveAtom::new("B", 6)).is_ok());
        assert!(reg.ensure(MotiveAtom::new("B", 5)).is_err());
    }

    #[test]
    fn registry_concurrent_reads() {
        let reg = Arc::new(Registry::new());
        let handles: Vec<_> = (0..8)
            .map(|i| {
                let reg = Arc::clone(&reg);
                std::thread::spawn(move || {
                    reg.register(MotiveAtom::new(format!("A{i}"), i)).unwrap();
                    reg.get(&format!("A{i}")).unwrap().dim
                })
            })
            .collect();
        for (i, h) in handles.into_iter().enumerate() {
            assert_eq!(h.join().unwrap(), i as u32);
        }
        assert_eq!(reg.names().len(), 8);
    }

    #[test]
    fn json_is_sorted() {
        let nf = NormalForm::from_terms([("Y", TatePolynomial::lefschetz(2)), ("B", TatePolynomial::one())]);
        assert_eq!(serde_json::to_string(&nf).unwrap(), r#"{"B":"1","Y":"L^2"}"#);
        assert_eq!(nf.to_string(), "B + Y*L^2");
    }
}
