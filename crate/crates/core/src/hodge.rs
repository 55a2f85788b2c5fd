//! Hodge diamonds, cohomology profiles with torsion flags, and the realization
//! of normal forms in both.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::motive::NormalForm;

/// Hodge numbers `h^{p,q}` for `0 <= p, q <= n`, stored densely.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HodgeDiamond {
    n: u32,
    h: Vec<u64>,
}

pub type DiamondTable = BTreeMap<String, HodgeDiamond>;

impl HodgeDiamond {
    /// All-zero diamond of dimension `n`.
    pub fn new(n: u32) -> Self {
        let side = n as usize + 1;
        Self {
            n,
            h: vec![0; side * side],
        }
    }

    pub fn from_entries(n: u32, entries: impl IntoIterator<Item = (u32, u32, u64)>) -> Result<Self> {
        let mut d = Self::new(n);
        for (p, q, v) in entries {
            if p > n || q > n {
                return Err(Error::InvalidArgument(format!(
                    "h^({p},{q}) outside a diamond of dimension {n}"
                )));
            }
            d.set(p, q, v);
        }
        Ok(d)
    }

    /// Diagonal diamond with `h^{p,p} = diag[p]`.
    pub fn diagonal(diag: &[u64]) -> Self {
        let n = diag.len().saturating_sub(1) as u32;
        let mut d = Self::new(n);
        for (p, v) in diag.iter().enumerate() {
            d.set(p as u32, p as u32, *v);
        }
        d
    }

    pub fn point() -> Self {
        Self::diagonal(&[1])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn index(&self, p: u32, q: u32) -> usize {
        p as usize * (self.n as usize + 1) + q as usize
    }

    /// `h^{p,q}`, zero outside the diamond.
    pub fn get(&self, p: i64, q: i64) -> u64 {
        if p < 0 || q < 0 || p > self.n as i64 || q > self.n as i64 {
            return 0;
        }
        self.h[self.index(p as u32, q as u32)]
    }

    pub fn set(&mut self, p: u32, q: u32, v: u64) {
        let i = self.index(p, q);
        self.h[i] = v;
    }

    fn add_at(&mut self, p: u32, q: u32, v: u64) -> Result<()> {
        let i = self.index(p, q);
        self.h[i] = self.h[i].checked_add(v).ok_or(Error::Overflow)?;
        Ok(())
    }

    /// Nonzero entries sorted by `(p, q)`.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, u64)> + '_ {
        let n = self.n;
        (0..=n)
            .flat_map(move |p| (0..=n).map(move |q| (p, q)))
            .filter_map(move |(p, q)| {
                let v = self.get(p as i64, q as i64);
                (v != 0).then_some((p, q, v))
            })
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(p, q, _)| p == q)
    }

    pub fn is_connected(&self) -> bool {
        self.get(0, 0) == 1
    }

    /// Betti numbers `b_k = sum_{p+q=k} h^{p,q}`, `k = 0..=2n`.
    pub fn betti(&self) -> Vec<u64> {
        let mut b = vec![0u64; 2 * self.n as usize + 1];
        for (p, q, v) in self.entries() {
            b[(p + q) as usize] += v;
        }
        b
    }

    pub fn euler(&self) -> i64 {
        alternating_sum(&self.betti())
    }

    /// Triangular text layout, `h^{n,n}` on top and `h^{0,0}` at the bottom.
    pub fn pretty(&self) -> String {
        let n = self.n as i64;
        let width = self.h.iter().map(|v| v.to_string().len()).max().unwrap_or(1);
        let mut lines = Vec::new();
        for s in (0..=2 * n).rev() {
            let mut cells = vec![String::new(); 2 * n as usize + 1];
            for p in 0..=n {
                let q = s - p;
                if !(0..=n).contains(&q) {
                    continue;
                }
                cells[(n + q - p) as usize] = self.get(p, q).to_string();
            }
            let line: Vec<String> = cells.iter().map(|c| format!("{c:>width$}")).collect();
            lines.push(line.join(" ").trim_end().to_owned());
        }
        lines.join("\n")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("diamond serializes")
    }
}

impl fmt::Display for HodgeDiamond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl fmt::Debug for HodgeDiamond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HodgeDiamond(n={}, {:?})",
            self.n,
            self.entries().collect::<Vec<_>>()
        )
    }
}

#[derive(Serialize, Deserialize)]
struct DiamondJson {
    n: u32,
    h: Vec<(u32, u32, u64)>,
}

impl Serialize for HodgeDiamond {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DiamondJson {
            n: self.n,
            h: self.entries().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HodgeDiamond {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = DiamondJson::deserialize(deserializer)?;
        HodgeDiamond::from_entries(raw.n, raw.h).map_err(serde::de::Error::custom)
    }
}

fn alternating_sum(b: &[u64]) -> i64 {
    b.iter()
        .enumerate()
        .map(|(k, v)| if k % 2 == 0 { *v as i64 } else { -(*v as i64) })
        .sum()
}

/// Tate twist by `L^k`: entry `(p,q)` moves to `(p+k, q+k)`. The result is
/// the diamond of weight `n + 2k`, so it keeps both symmetries.
pub fn twist_diamond(d: &HodgeDiamond, k: u32) -> HodgeDiamond {
    let mut out = HodgeDiamond::new(d.n + 2 * k);
    for (p, q, v) in d.entries() {
        out.set(p + k, q + k, v);
    }
    out
}

/// Conjugation `h^{p,q} = h^{q,p}` and duality `h^{p,q} = h^{n-p,n-q}`.
pub fn check_symmetries(d: &HodgeDiamond) -> bool {
    let n = d.n as i64;
    (0..=n).all(|p| (0..=n).all(|q| d.get(p, q) == d.get(q, p) && d.get(p, q) == d.get(n - p, n - q)))
}

/// Hodge realization: `h^{p,q} = sum_atoms sum_k a_k h^{p-k,q-k}(atom)`.
pub fn realize_hodge(nf: &NormalForm, table: &DiamondTable) -> Result<HodgeDiamond> {
    let mut n = 0;
    for (name, p) in nf.iter() {
        let d = table
            .get(name)
            .ok_or_else(|| Error::MissingRealization(name.to_owned()))?;
        n = n.max(d.n + p.degree().unwrap_or(0));
    }
    let mut out = HodgeDiamond::new(n);
    for (name, poly) in nf.iter() {
        let d = &table[name];
        for (k, _) in poly.terms() {
            let mult = poly.coeff_u64(k)?;
            let twisted = twist_diamond(d, k);
            for (p, q, v) in twisted.entries() {
                out.add_at(p, q, v.checked_mul(mult).ok_or(Error::Overflow)?)?;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Torsion {
    Free,
    Unknown,
}

impl Torsion {
    pub fn and(self, other: Torsion) -> Torsion {
        match (self, other) {
            (Torsion::Free, Torsion::Free) => Torsion::Free,
            _ => Torsion::Unknown,
        }
    }

    pub fn from_flag(torsion_free: bool) -> Torsion {
        if torsion_free {
            Torsion::Free
        } else {
            Torsion::Unknown
        }
    }
}

impl fmt::Display for Torsion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Torsion::Free => "FREE",
            Torsion::Unknown => "UNKNOWN",
        })
    }
}

/// A rank that may involve named symbolic parameters: `constant + sum c_i * sym_i`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RankExpr {
    constant: u64,
    symbols: BTreeMap<String, u64>,
}

impl RankExpr {
    pub fn num(n: u64) -> Self {
        Self {
            constant: n,
            symbols: BTreeMap::new(),
        }
    }

    pub fn symbol(name: impl Into<String>) -> Self {
        Self {
            constant: 0,
            symbols: BTreeMap::from([(name.into(), 1)]),
        }
    }

    pub fn as_num(&self) -> Option<u64> {
        self.symbols.is_empty().then_some(self.constant)
    }

    pub fn is_symbolic(&self) -> bool {
        !self.symbols.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.symbols.keys().map(String::as_str)
    }

    pub fn add(&self, other: &RankExpr) -> Result<RankExpr> {
        let mut out = self.clone();
        out.constant = out.constant.checked_add(other.constant).ok_or(Error::Overflow)?;
        for (s, c) in &other.symbols {
            let slot = out.symbols.entry(s.clone()).or_default();
            *slot = slot.checked_add(*c).ok_or(Error::Overflow)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: u64) -> Result<RankExpr> {
        if k == 0 {
            return Ok(RankExpr::num(0));
        }
        let mut out = RankExpr::num(self.constant.checked_mul(k).ok_or(Error::Overflow)?);
        for (s, c) in &self.symbols {
            out.symbols.insert(s.clone(), c.checked_mul(k).ok_or(Error::Overflow)?);
        }
        Ok(out)
    }
}

impl fmt::Display for RankExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .symbols
            .iter()
            .map(|(s, c)| if *c == 1 { s.clone() } else { format!("{c}{s}") })
            .collect();
        if self.constant != 0 || parts.is_empty() {
            parts.push(self.constant.to_string());
        }
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for RankExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_num() {
            Some(n) => serializer.serialize_u64(n),
            None => serializer.collect_str(self),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeInfo {
    pub rank: RankExpr,
    pub torsion: Torsion,
}

/// Ranks and torsion flags of `H^k(-, Z)` for `k = 0..=2*dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyProfile {
    dim: u32,
    degrees: Vec<DegreeInfo>,
}

pub type ProfileTable = BTreeMap<String, CohomologyProfile>;

impl CohomologyProfile {
    pub fn new(dim: u32, degrees: Vec<DegreeInfo>) -> Result<Self> {
        if degrees.len() != 2 * dim as usize + 1 {
            return Err(Error::InvalidArgument(format!(
                "profile of dimension {dim} needs {} degrees, got {}",
                2 * dim + 1,
                degrees.len()
            )));
        }
        Ok(Self { dim, degrees })
    }

    fn zero(dim: u32) -> Self {
        let degrees = (0..=2 * dim)
            .map(|_| DegreeInfo {
                rank: RankExpr::num(0),
                torsion: Torsion::Free,
            })
            .collect();
        Self { dim, degrees }
    }

    pub fn from_diamond(d: &HodgeDiamond, torsion_free: bool) -> Self {
        let torsion = Torsion::from_flag(torsion_free);
        let degrees = d
            .betti()
            .into_iter()
            .map(|b| DegreeInfo {
                rank: RankExpr::num(b),
                torsion,
            })
            .collect();
        Self { dim: d.n(), degrees }
    }

    /// Same profile with every torsion flag replaced.
    pub fn with_torsion(mut self, torsion: Torsion) -> Self {
        for d in &mut self.degrees {
            d.torsion = torsion;
        }
        self
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn degrees(&self) -> &[DegreeInfo] {
        &self.degrees
    }

    pub fn rank(&self, k: usize) -> Option<&RankExpr> {
        self.degrees.get(k).map(|d| &d.rank)
    }

    pub fn torsion(&self) -> Torsion {
        self.degrees.iter().fold(Torsion::Free, |acc, d| acc.and(d.torsion))
    }

    pub fn symbolic_degrees(&self) -> Vec<usize> {
        (0..self.degrees.len())
            .filter(|&k| self.degrees[k].rank.is_symbolic())
            .collect()
    }

    /// Numeric ranks satisfy `rank(k) = rank(2n - k)`.
    pub fn satisfies_duality(&self) -> bool {
        let top = self.degrees.len() - 1;
        (0..=top).all(
            |k| match (self.degrees[k].rank.as_num(), self.degrees[top - k].rank.as_num()) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            },
        )
    }

    /// Tensor with `L^k`: degrees shift up by `2k`, dimension by `k`.
    pub fn twist(&self, k: u32) -> Self {
        let mut out = Self::zero(self.dim + k);
        for (i, d) in self.degrees.iter().enumerate() {
            out.degrees[i + 2 * k as usize] = d.clone();
        }
        out
    }

    /// Direct sum.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.dim.max(other.dim));
        for src in [self, other] {
            for (i, d) in src.degrees.iter().enumerate() {
                let slot = &mut out.degrees[i];
                slot.rank = slot.rank.add(&d.rank)?;
                slot.torsion = slot.torsion.and(d.torsion);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: u64) -> Result<Self> {
        let mut out = self.clone();
        for d in &mut out.degrees {
            d.rank = d.rank.scale(k)?;
        }
        Ok(out)
    }
}

impl fmt::Display for CohomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .degrees
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let flag = match d.torsion {
                    Torsion::Free => "",
                    Torsion::Unknown => "?",
                };
                format!("b{k}={}{flag}", d.rank)
            })
            .collect();
        f.write_str(&parts.join(", "))
    }
}

/// Cohomology of a smooth ample divisor in `ambient`, via the Lefschetz
/// hyperplane theorem below the middle degree, duality above it, and the
/// universal coefficient theorem for torsion. The middle rank is a fresh
/// symbol named `m`.
pub fn lefschetz_section_profile(ambient: &HodgeDiamond, ambient_torsion_free: bool) -> Result<CohomologyProfile> {
    lefschetz_section_profile_named(ambient, ambient_torsion_free, "m")
}

pub fn lefschetz_section_profile_named(
    ambient: &HodgeDiamond,
    ambient_torsion_free: bool,
    middle: &str,
) -> Result<CohomologyProfile> {
    if ambient.n() == 0 {
        return Err(Error::InvalidArgument(
            "a hyperplane section of a point is empty".into(),
        ));
    }
    let dim = ambient.n() - 1;
    let b = ambient.betti();
    let torsion = Torsion::from_flag(ambient_torsion_free);
    let top = 2 * dim as usize;
    let degrees = (0..=top)
        .map(|k| {
            let rank = match k.cmp(&(dim as usize)) {
                std::cmp::Ordering::Less => RankExpr::num(b[k]),
                std::cmp::Ordering::Equal => RankExpr::symbol(middle),
                std::cmp::Ordering::Greater => RankExpr::num(b[top - k]),
            };
            DegreeInfo { rank, torsion }
        })
        .collect();
    CohomologyProfile::new(dim, degrees)
}

/// A direct sum of Tate twists of torsion-free groups is torsion-free.
pub fn torsion_status(nf: &NormalForm, table: &ProfileTable) -> Result<Torsion> {
    nf.iter().try_fold(Torsion::Free, |acc, (name, _)| {
        let profile = table
            .get(name)
            .ok_or_else(|| Error::MissingRealization(name.to_owned()))?;
        Ok(acc.and(profile.torsion()))
    })
}

/// Cohomology profile of a normal form, carrying symbolic ranks through the sum.
pub fn realize_profile(nf: &NormalForm, table: &ProfileTable) -> Result<CohomologyProfile> {
    let mut out = CohomologyProfile::zero(0);
    for (name, poly) in nf.iter() {
        let profile = table
            .get(name)
            .ok_or_else(|| Error::MissingRealization(name.to_owned()))?;
        for (k, _) in poly.terms() {
            let term = profile.twist(k).scale(poly.coeff_u64(k)?)?;
            out = out.direct_sum(&term)?;
        }
    }
    Ok(out)
}

/// Sources of a Betti vector.
pub trait Betti {
    fn betti_numbers(&self) -> Result<Vec<u64>>;

    fn euler_characteristic(&self) -> Result<i64> {
        Ok(alternating_sum(&self.betti_numbers()?))
    }
}

impl Betti for HodgeDiamond {
    fn betti_numbers(&self) -> Result<Vec<u64>> {
        Ok(self.betti())
    }
}

impl Betti for CohomologyProfile {
    fn betti_numbers(&self) -> Result<Vec<u64>> {
        self.degrees
            .iter()
            .enumerate()
            .map(|(degree, d)| {
                d.rank.as_num().ok_or_else(|| Error::SymbolicRankPresent {
                    degree,
                    rank: d.rank.to_string(),
                })
            })
            .collect()
    }
}

/// Coefficient of `t^k` is the rank of `H^k`.
pub fn betti_polynomial<B: Betti + ?Sized>(source: &B) -> Result<Vec<u64>> {
    source.betti_numbers()
}
