//! Geometric constructors on motive expressions: projective bundles,
//! blow-ups along smooth centers, Zariski-locally trivial projective
//! fibrations, Künneth products with a cellular factor, and expected
//! codimensions of degeneracy loci.

use crate::error::{Error, Result};
use crate::motive::{dim_of, normalize, MotiveExpr, Registry};
use crate::tate::TatePolynomial;

/// `P(E)` for a rank `r` bundle `E`: `base * (1 + L + ... + L^(r-1))`.
pub fn projective_bundle(base: &MotiveExpr, rank: u32) -> Result<MotiveExpr> {
    if rank == 0 {
        return Err(Error::InvalidRank("projective bundle of a rank 0 bundle".into()));
    }
    Ok(p_fibration(base, rank - 1))
}

/// A `P^k`-fibration over `base`, assumed to decompose like a product.
pub fn p_fibration(base: &MotiveExpr, k: u32) -> MotiveExpr {
    if k == 0 {
        return base.clone();
    }
    base.clone().twist(TatePolynomial::range(0, k))
}

/// `Bl_Z X = X + Z * (L + ... + L^(c-1))` without any dimension check.
pub fn blow_up_formula(ambient: &MotiveExpr, center: &MotiveExpr, codim: u32) -> MotiveExpr {
    if codim < 2 {
        return ambient.clone();
    }
    ambient.clone() + center.clone().twist(TatePolynomial::range(1, codim - 1))
}

/// Blow-up of `ambient` along a smooth `center` of codimension `codim`.
/// The codimension must agree with `dim(ambient) - dim(center)`.
pub fn blow_up(registry: &Registry, ambient: &MotiveExpr, center: &MotiveExpr, codim: u32) -> Result<MotiveExpr> {
    if codim < 2 {
        return Err(Error::InvalidArgument(format!(
            "blow-up center of codimension {codim} < 2"
        )));
    }
    let da = dim_of(ambient, registry)?;
    let dc = dim_of(center, registry)?;
    if dc + codim != da {
        return Err(Error::DimensionMismatch(format!(
            "center of dimension {dc} and codimension {codim} in an ambient of dimension {da}"
        )));
    }
    Ok(blow_up_formula(ambient, center, codim))
}

/// Class of `e` in terms of a point, if every atom of `e` is cellular.
fn cellular_class(registry: &Registry, e: &MotiveExpr) -> Result<Option<TatePolynomial>> {
    let mut total = TatePolynomial::zero();
    for (name, p) in normalize(e).iter() {
        let atom = registry
            .get(name)
            .ok_or_else(|| Error::UnregisteredAtom(name.to_owned()))?;
        match &atom.cells {
            Some(cells) => total += &(cells * p),
            None => return Ok(None),
        }
    }
    Ok(Some(total))
}

/// `a x b` when one factor is cellular: the other factor tensored with the
/// cellular factor's class. The second factor is expanded when both are.
pub fn kunneth(registry: &Registry, a: &MotiveExpr, b: &MotiveExpr) -> Result<MotiveExpr> {
    if let Some(cells) = cellular_class(registry, b)? {
        return Ok(tensor(a, cells));
    }
    if let Some(cells) = cellular_class(registry, a)? {
        return Ok(tensor(b, cells));
    }
    let label = |e: &MotiveExpr| e.names().join("+");
    Err(Error::NonCellularFactor(label(a), label(b)))
}

fn tensor(e: &MotiveExpr, cells: TatePolynomial) -> MotiveExpr {
    if cells.is_one() {
        e.clone()
    } else {
        e.clone().twist(cells)
    }
}

/// Expected codimension `(e - r)(f - r)` of the locus where an `e x f` map has rank `<= r`.
pub fn codim_rank_leq(e: u32, f: u32, r: u32) -> Result<u32> {
    if r > e.min(f) {
        return Err(Error::InvalidRank(format!("rank {r} exceeds min({e}, {f})")));
    }
    Ok((e - r) * (f - r))
}

/// Expected codimension of the corank `>= k` locus.
pub fn corank_codim(e: u32, f: u32, k: u32) -> Result<u32> {
    let full = e.min(f);
    if k > full {
        return Err(Error::InvalidRank(format!("corank {k} exceeds min({e}, {f})")));
    }
    codim_rank_leq(e, f, full - k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::Atlas;
    use crate::motive::{MotiveAtom, NormalForm};

    fn p(c: &[u32]) -> TatePolynomial {
        TatePolynomial::from_dense(c.iter().copied())
    }

    fn gm_registry() -> Registry {
        let reg = Registry::new();
        reg.register(MotiveAtom::new("B", 6)).unwrap();
        reg.register(MotiveAtom::new("Y", 2)).unwrap();
        reg.register(MotiveAtom::new("Hilb", 3)).unwrap();
        reg
    }

    #[test]
    fn projective_bundle_examples() {
        let y = MotiveExpr::atom("Y");
        assert_eq!(
            normalize(&projective_bundle(&y, 4).unwrap()),
            NormalForm::single("Y", p(&[1, 1, 1, 1]))
        );
        let b = MotiveExpr::atom("B");
        assert_eq!(
            normalize(&projective_bundle(&b, 3).unwrap()),
            NormalForm::single("B", p(&[1, 1, 1]))
        );
        assert_eq!(projective_bundle(&b, 1).unwrap(), b);
        assert!(matches!(projective_bundle(&b, 0), Err(Error::InvalidRank(_))));
    }

    #[test]
    fn p_fibration_examples() {
        let hilb = MotiveExpr::atom("Hilb");
        let d2 = p_fibration(&hilb, 1);
        assert_eq!(normalize(&d2), NormalForm::single("Hilb", p(&[1, 1])));
        assert_eq!(
            normalize(&p_fibration(&d2, 2)),
            NormalForm::single("Hilb", p(&[1, 2, 2, 1]))
        );
        let x = MotiveExpr::unknown("X");
        assert_eq!(p_fibration(&x, 0), x);
    }

    #[test]
    fn blow_up_examples() {
        let reg = gm_registry();
        let top = MotiveExpr::atom("B").twist(TatePolynomial::range(0, 4));
        let d2 = p_fibration(&MotiveExpr::atom("Hilb"), 1);
        let bl = blow_up(&reg, &top, &d2, 6).unwrap();
        let added = normalize(&bl).coeff("Hilb");
        assert_eq!(added, p(&[1, 1]) * TatePolynomial::range(1, 5));

        let pb_r = projective_bundle(&MotiveExpr::atom("B"), 3).unwrap();
        let ps_y = projective_bundle(&MotiveExpr::atom("Y"), 4).unwrap();
        let bl = blow_up(&reg, &pb_r, &ps_y, 3).unwrap();
        assert_eq!(normalize(&bl).coeff("Y"), p(&[1, 1, 1, 1]) * p(&[0, 1, 1]));

        assert!(matches!(blow_up(&reg, &top, &d2, 5), Err(Error::DimensionMismatch(_))));
        assert!(matches!(blow_up(&reg, &top, &top, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn blow_up_point_on_plane() {
        let atlas = Atlas::new();
        atlas.projective_space(2).unwrap();
        atlas.projective_space(0).unwrap();
        let bl = blow_up(atlas.registry(), &MotiveExpr::atom("P2"), &MotiveExpr::atom("P0"), 2).unwrap();
        let nf = normalize(&bl);
        let d = crate::hodge::realize_hodge(&nf, &atlas.diamond_table()).unwrap();
        assert_eq!(d.euler(), 4);
    }

    #[test]
    fn kunneth_examples() {
        let atlas = Atlas::new();
        atlas.projective_space(4).unwrap();
        atlas.projective_space(0).unwrap();
        atlas.k3().unwrap();
        let reg = atlas.registry();
        reg.register(MotiveAtom::new("B", 6)).unwrap();
        let prod = kunneth(reg, &MotiveExpr::atom("B"), &MotiveExpr::atom("P4")).unwrap();
        assert_eq!(normalize(&prod), NormalForm::single("B", TatePolynomial::range(0, 4)));
        let k3 = MotiveExpr::atom("K3");
        assert_eq!(kunneth(reg, &MotiveExpr::atom("P0"), &k3).unwrap(), k3);
        assert_eq!(kunneth(reg, &k3, &MotiveExpr::atom("P0")).unwrap(), k3);
        assert!(matches!(kunneth(reg, &k3, &k3), Err(Error::NonCellularFactor(..))));
    }

    #[test]
    fn codimension_examples() {
        assert_eq!(codim_rank_leq(3, 4, 2).unwrap(), 2);
        assert_eq!(codim_rank_leq(3, 4, 1).unwrap(), 6);
        assert_eq!(codim_rank_leq(3, 4, 0).unwrap(), 12);
        assert!(codim_rank_leq(3, 4, 4).is_err());
        assert_eq!(corank_codim(3, 4, 1).unwrap(), 2);
        assert_eq!(corank_codim(3, 4, 2).unwrap(), 6);
        assert_eq!(corank_codim(3, 4, 3).unwrap(), 12);
        assert!(corank_codim(3, 4, 4).is_err());
    }
}
