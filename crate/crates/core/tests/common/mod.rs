#![allow(dead_code)]

pub mod laws;
pub mod oracles;
pub mod strategies;

use motive_calc_core::atlas::{Atlas, AtlasEntry, AtlasRecord};
use motive_calc_core::{normalize, realize_hodge, HodgeDiamond, MotiveExpr, TatePolynomial, Torsion};

pub fn poly(c: &[u32]) -> TatePolynomial {
    TatePolynomial::from_dense(c.iter().copied())
}

/// Diamond of a constructor-built expression whose atoms all have diamonds.
pub fn diamond_of(atlas: &Atlas, e: &MotiveExpr) -> HodgeDiamond {
    realize_hodge(&normalize(e), &atlas.diamond_table()).expect("every atom is realized")
}

pub fn euler_of(atlas: &Atlas, e: &MotiveExpr) -> i64 {
    diamond_of(atlas, e).euler()
}

/// A surface with no odd cohomology and the given `h^{2,0}`, `h^{1,1}`.
pub fn surface(h20: u64, h11: u64) -> AtlasEntry {
    let diamond = HodgeDiamond::from_entries(2, [(0, 0, 1), (2, 0, h20), (0, 2, h20), (1, 1, h11), (2, 2, 1)]).unwrap();
    AtlasEntry::try_from(AtlasRecord {
        name: "S".into(),
        dim: 2,
        diamond,
        torsion: Torsion::Free,
        cellular: false,
        provenance: String::new(),
    })
    .unwrap()
}
