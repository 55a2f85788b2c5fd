//! Hodge diamonds and torsion facts of the standard varieties: projective
//! spaces, smooth quadrics, Grassmannians, K3 surfaces and Hilbert squares.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hodge::{check_symmetries, CohomologyProfile, DiamondTable, HodgeDiamond, ProfileTable, Torsion};
use crate::motive::{MotiveAtom, Registry, Tag};
use crate::tate::TatePolynomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtlasEntry {
    pub atom: MotiveAtom,
    pub diamond: HodgeDiamond,
    pub torsion_free: bool,
    pub provenance: String,
}

impl AtlasEntry {
    pub fn name(&self) -> &str {
        &self.atom.name
    }

    pub fn profile(&self) -> CohomologyProfile {
        CohomologyProfile::from_diamond(&self.diamond, self.torsion_free)
    }

    pub fn euler(&self) -> i64 {
        self.diamond.euler()
    }

    pub fn validate(&self) -> Result<()> {
        if !check_symmetries(&self.diamond) {
            return Err(Error::InvalidArgument(format!(
                "diamond of `{}` is not symmetric",
                self.name()
            )));
        }
        if self.atom.dim != self.diamond.n() {
            return Err(Error::DimensionMismatch(format!(
                "`{}` has dim {} but a diamond of dimension {}",
                self.name(),
                self.atom.dim,
                self.diamond.n()
            )));
        }
        Ok(())
    }

    fn cellular(name: String, diamond: HodgeDiamond, provenance: &str) -> Self {
        let cells = TatePolynomial::from_dense((0..=diamond.n() as i64).map(|p| diamond.get(p, p)));
        let atom = MotiveAtom::new(name, diamond.n())
            .with_tag(Tag::TorsionFree)
            .with_tag(Tag::SmoothProjective)
            .with_tag(Tag::Connected)
            .with_cells(cells);
        Self {
            atom,
            diamond,
            torsion_free: true,
            provenance: provenance.to_owned(),
        }
    }
}

pub fn projective_space(n: u32) -> AtlasEntry {
    AtlasEntry::cellular(
        format!("P{n}"),
        HodgeDiamond::diagonal(&vec![1; n as usize + 1]),
        "cellular: one cell in each even real dimension",
    )
}

pub fn quadric(n: u32) -> Result<AtlasEntry> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "a smooth quadric of dimension 0 is two points".into(),
        ));
    }
    let mut diag = vec![1; n as usize + 1];
    if n.is_multiple_of(2) {
        diag[n as usize / 2] = 2;
    }
    Ok(AtlasEntry::cellular(
        format!("Q{n}"),
        HodgeDiamond::diagonal(&diag),
        "cellular: smooth quadric, two middle cells in even dimension",
    ))
}

/// The Gaussian binomial `[n choose k]_q` as a polynomial in `L`.
pub fn gaussian_binomial(n: u32, k: u32) -> TatePolynomial {
    if k > n {
        return TatePolynomial::zero();
    }
    // q-Pascal: [n, k] = [n-1, k-1] + q^k [n-1, k]
    let mut row = vec![TatePolynomial::one()];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m as usize + 1);
        for j in 0..=m {
            let left = if j > 0 {
                row[j as usize - 1].clone()
            } else {
                TatePolynomial::zero()
            };
            let right = if j < m {
                row[j as usize].shift(j)
            } else {
                TatePolynomial::zero()
            };
            next.push(left + right);
        }
        row = next;
    }
    row.swap_remove(k as usize)
}

pub fn grassmannian(k: u32, n: u32) -> Result<AtlasEntry> {
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("Gr({k},{n}) needs 1 <= k < n")));
    }
    let cells = gaussian_binomial(n, k);
    let diag = cells
        .to_dense()
        .iter()
        .map(|c| u64::try_from(c).map_err(|_| Error::Overflow))
        .collect::<Result<Vec<_>>>()?;
    Ok(AtlasEntry::cellular(
        format!("Gr({k},{n})"),
        HodgeDiamond::diagonal(&diag),
        "cellular: Schubert cells counted by the Gaussian binomial",
    ))
}

pub fn k3() -> AtlasEntry {
    let diamond = HodgeDiamond::from_entries(2, [(0, 0, 1), (2, 0, 1), (0, 2, 1), (1, 1, 20), (2, 2, 1)])
        .expect("K3 diamond is in range");
    AtlasEntry {
        atom: MotiveAtom::new("K3", 2)
            .with_tag(Tag::TorsionFree)
            .with_tag(Tag::SmoothProjective)
            .with_tag(Tag::Connected),
        diamond,
        torsion_free: true,
        provenance: "K3 surface: simply connected, integral cohomology torsion-free".into(),
    }
}

/// Hilbert square of a surface with vanishing odd cohomology:
/// `Sym^2 H(S) + H(S)(-1)`.
pub fn hilb2_surface(s: &AtlasEntry) -> Result<AtlasEntry> {
    let d = &s.diamond;
    if d.n() != 2 {
        return Err(Error::InvalidArgument(format!("`{}` is not a surface", s.name())));
    }
    if d.betti().iter().skip(1).step_by(2).any(|b| *b != 0) {
        return Err(Error::OddCohomologyUnsupported(s.name().to_owned()));
    }

    let cells: Vec<(u32, u32, u64)> = d.entries().collect();
    let mut out = HodgeDiamond::new(4);
    let mut bump = |p: u32, q: u32, v: u64| -> Result<()> {
        let cur = out.get(p as i64, q as i64);
        out.set(p, q, cur.checked_add(v).ok_or(Error::Overflow)?);
        Ok(())
    };
    // Symmetric square: unordered pairs of basis classes, all of even degree.
    for (i, &(p1, q1, h1)) in cells.iter().enumerate() {
        let diag = h1.checked_mul(h1 + 1).ok_or(Error::Overflow)? / 2;
        bump(2 * p1, 2 * q1, diag)?;
        for &(p2, q2, h2) in &cells[i + 1..] {
            bump(p1 + p2, q1 + q2, h1.checked_mul(h2).ok_or(Error::Overflow)?)?;
        }
    }
    // Exceptional divisor over the diagonal: H(S) twisted once.
    for (p, q, v) in d.entries() {
        bump(p + 1, q + 1, v)?;
    }

    let mut atom = MotiveAtom::new(format!("Hilb2{}", s.name()), 4)
        .with_tag(Tag::SmoothProjective)
        .with_tag(Tag::Connected);
    if s.torsion_free {
        atom = atom.with_tag(Tag::TorsionFree);
    }
    Ok(AtlasEntry {
        atom,
        diamond: out,
        torsion_free: s.torsion_free,
        provenance: format!("Hilbert square of `{}`: Sym^2 M(S) + M(S)(1)", s.name()),
    })
}

/// JSON shape of an atlas entry, shared by the dump and the `--atlas` loader.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtlasRecord {
    pub name: String,
    pub dim: u32,
    pub diamond: HodgeDiamond,
    pub torsion: Torsion,
    #[serde(default)]
    pub cellular: bool,
    #[serde(default)]
    pub provenance: String,
}

impl From<&AtlasEntry> for AtlasRecord {
    fn from(e: &AtlasEntry) -> Self {
        Self {
            name: e.name().to_owned(),
            dim: e.atom.dim,
            diamond: e.diamond.clone(),
            torsion: Torsion::from_flag(e.torsion_free),
            cellular: e.atom.cells.is_some(),
            provenance: e.provenance.clone(),
        }
    }
}

impl TryFrom<AtlasRecord> for AtlasEntry {
    type Error = Error;

    fn try_from(r: AtlasRecord) -> Result<Self> {
        let torsion_free = r.torsion == Torsion::Free;
        let mut atom = MotiveAtom::new(r.name, r.dim).with_tag(Tag::SmoothProjective);
        if torsion_free {
            atom = atom.with_tag(Tag::TorsionFree);
        }
        if r.diamond.is_connected() {
            atom = atom.with_tag(Tag::Connected);
        }
        if r.cellular {
            if !r.diamond.is_diagonal() {
                return Err(Error::InvalidArgument(format!(
                    "`{}` is marked cellular but has off-diagonal classes",
                    atom.name
                )));
            }
            let d = &r.diamond;
            atom = atom.with_cells(TatePolynomial::from_dense((0..=d.n() as i64).map(|p| d.get(p, p))));
        }
        let entry = AtlasEntry {
            atom,
            diamond: r.diamond,
            torsion_free,
            provenance: if r.provenance.is_empty() {
                "user supplied".into()
            } else {
                r.provenance
            },
        };
        entry.validate()?;
        Ok(entry)
    }
}

/// Cache of atlas entries, with their atoms registered in a shared [`Registry`].
#[derive(Debug, Default)]
pub struct Atlas {
    registry: Registry,
    entries: RwLock<BTreeMap<String, Arc<AtlasEntry>>>,
}

impl Atlas {
    pub fn new() -> Self {
        Self::default()
    }

    /// The entries every dump contains.
    pub fn standard() -> Result<Self> {
        let atlas = Self::new();
        for n in 0..=4 {
            atlas.projective_space(n)?;
        }
        atlas.quadric(5)?;
        atlas.quadric(6)?;
        atlas.grassmannian(2, 4)?;
        atlas.grassmannian(2, 5)?;
        let k3 = atlas.k3()?;
        atlas.hilb2(&k3)?;
        Ok(atlas)
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn get(&self, name: &str) -> Option<Arc<AtlasEntry>> {
        self.entries.read().expect("atlas lock poisoned").get(name).cloned()
    }

    pub fn insert(&self, entry: AtlasEntry) -> Result<Arc<AtlasEntry>> {
        entry.validate()?;
        let mut entries = self.entries.write().expect("atlas lock poisoned");
        if let Some(existing) = entries.get(entry.name()) {
            if **existing == entry {
                return Ok(Arc::clone(existing));
            }
            return Err(Error::DuplicateAtom(entry.atom.name));
        }
        self.registry.ensure(entry.atom.clone())?;
        let entry = Arc::new(entry);
        entries.insert(entry.name().to_owned(), Arc::clone(&entry));
        Ok(entry)
    }

    fn cached(&self, name: &str, build: impl FnOnce() -> Result<AtlasEntry>) -> Result<Arc<AtlasEntry>> {
        match self.get(name) {
            Some(e) => Ok(e),
            None => self.insert(build()?),
        }
    }

    pub fn projective_space(&self, n: u32) -> Result<Arc<AtlasEntry>> {
        self.cached(&format!("P{n}"), || Ok(projective_space(n)))
    }

    pub fn quadric(&self, n: u32) -> Result<Arc<AtlasEntry>> {
        self.cached(&format!("Q{n}"), || quadric(n))
    }

    pub fn grassmannian(&self, k: u32, n: u32) -> Result<Arc<AtlasEntry>> {
        self.cached(&format!("Gr({k},{n})"), || grassmannian(k, n))
    }

    pub fn k3(&self) -> Result<Arc<AtlasEntry>> {
        self.cached("K3", || Ok(k3()))
    }

    pub fn hilb2(&self, s: &AtlasEntry) -> Result<Arc<AtlasEntry>> {
        self.cached(&format!("Hilb2{}", s.name()), || hilb2_surface(s))
    }

    pub fn entries(&self) -> Vec<Arc<AtlasEntry>> {
        self.entries
            .read()
            .expect("atlas lock poisoned")
            .values()
            .cloned()
            .collect()
    }

    pub fn diamond_table(&self) -> DiamondTable {
        self.entries()
            .iter()
            .map(|e| (e.name().to_owned(), e.diamond.clone()))
            .collect()
    }

    pub fn profile_table(&self) -> ProfileTable {
        self.entries()
            .iter()
            .map(|e| (e.name().to_owned(), e.profile()))
            .collect()
    }

    /// JSON array of all cached entries, sorted by name.
    pub fn dump_json(&self) -> serde_json::Value {
        let records: Vec<AtlasRecord> = self.entries().iter().map(|e| AtlasRecord::from(e.as_ref())).collect();
        serde_json::to_value(records).expect("atlas serializes")
    }

    /// Loads extra entries from a JSON array of records.
    pub fn load_json(&self, text: &str) -> Result<Vec<Arc<AtlasEntry>>> {
        let records: Vec<AtlasRecord> =
            serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("atlas file: {e}")))?;
        records
            .into_iter()
            .map(|r| self.insert(AtlasEntry::try_from(r)?))
            .collect()
    }
}
