//! The Gushel-Mukai sixfold computation, end to end.
//!
//! Two routes lead to the same tenfold `Bl_{D'_1}(Bl_{D_2}(B x P^4))`:
//!
//! * from `B x P(V_5)`, blowing up `D_2` (codimension 6) and then `D'_1`
//!   (codimension 2), where `D'_1` is itself an iterated blow-up of `P_B(R)`;
//! * from `X`, through the `P^3 x P^1`-fibration `P(S_X) x_X P_X(U_X)` and a
//!   blow-up along a `P^2`-fibration over `D_2` (codimension 4).
//!
//! Comparing the two normal forms and cancelling yields the decomposition of
//! `X`; realizing it gives the Hodge diamond, and the torsion flags of the
//! atoms give the torsion-freeness certificate.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::atlas::{self, AtlasEntry};
use crate::error::{Error, Result};
use crate::formulas::{blow_up, blow_up_formula, corank_codim, kunneth, p_fibration, projective_bundle};
use crate::hodge::{
    check_symmetries, lefschetz_section_profile, realize_hodge, realize_profile, twist_diamond, CohomologyProfile,
    DiamondTable, HodgeDiamond, ProfileTable, Torsion,
};
use crate::motive::{normalize, solve_tensor_factor, MotiveAtom, MotiveExpr, NormalForm, Registry, Solution};
use crate::tate::TatePolynomial;

pub const B: &str = "B";
pub const Y: &str = "Y";
pub const HILB: &str = "Hilb";
pub const X: &str = "X";

pub const REPORT_SCHEMA: &str = "motive-calc/1";

/// Declared dimensions, codimensions and fibration ranks of the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GmFacts {
    /// Source and target ranks of the bundle map whose degeneracy loci are blown up.
    pub map_source_rank: u32,
    pub map_target_rank: u32,
    /// `dim P(V_5)`.
    pub projective_factor_dim: u32,
    pub dim_b: u32,
    pub dim_y: u32,
    pub dim_hilb: u32,
    pub dim_x: u32,
    pub codim_d1: u32,
    pub codim_d2: u32,
    /// `D_2 -> Hilb` is a `P^k`-fibration.
    pub d2_fiber_dim: u32,
    /// Rank of `R` in `P_B(R)`.
    pub r_bundle_rank: u32,
    /// Rank of `S_Y` in `P(S_Y)`.
    pub s_bundle_rank: u32,
    /// Codimension of `P(S_Y)` in `P_B(R)`.
    pub dprime_first_codim: u32,
    /// `rho^{-1}(D_2) -> D_2` is a `P^k`-fibration.
    pub dprime_center_fiber_dim: u32,
    /// Codimension of `rho^{-1}(D_2)` in `Bl_{P(S_Y)} P_B(R)`.
    pub dprime_second_codim: u32,
    pub x_spinor_fiber_dim: u32,
    pub x_tautological_fiber_dim: u32,
    /// The left-route center is a `P^k`-fibration over `D_2`.
    pub lhs_center_fiber_dim: u32,
    pub lhs_center_codim: u32,
}

impl Default for GmFacts {
    fn default() -> Self {
        Self {
            map_source_rank: 3,
            map_target_rank: 4,
            projective_factor_dim: 4,
            dim_b: 6,
            dim_y: 2,
            dim_hilb: 3,
            dim_x: 6,
            codim_d1: 2,
            codim_d2: 6,
            d2_fiber_dim: 1,
            r_bundle_rank: 3,
            s_bundle_rank: 4,
            dprime_first_codim: 3,
            dprime_center_fiber_dim: 1,
            dprime_second_codim: 3,
            x_spinor_fiber_dim: 3,
            x_tautological_fiber_dim: 1,
            lhs_center_fiber_dim: 2,
            lhs_center_codim: 4,
        }
    }
}

impl GmFacts {
    /// Every field by name, for perturbation sweeps.
    pub fn fields_mut(&mut self) -> Vec<(&'static str, &mut u32)> {
        vec![
            ("map_source_rank", &mut self.map_source_rank),
            ("map_target_rank", &mut self.map_target_rank),
            ("projective_factor_dim", &mut self.projective_factor_dim),
            ("dim_b", &mut self.dim_b),
            ("dim_y", &mut self.dim_y),
            ("dim_hilb", &mut self.dim_hilb),
            ("dim_x", &mut self.dim_x),
            ("codim_d1", &mut self.codim_d1),
            ("codim_d2", &mut self.codim_d2),
            ("d2_fiber_dim", &mut self.d2_fiber_dim),
            ("r_bundle_rank", &mut self.r_bundle_rank),
            ("s_bundle_rank", &mut self.s_bundle_rank),
            ("dprime_first_codim", &mut self.dprime_first_codim),
            ("dprime_center_fiber_dim", &mut self.dprime_center_fiber_dim),
            ("dprime_second_codim", &mut self.dprime_second_codim),
            ("x_spinor_fiber_dim", &mut self.x_spinor_fiber_dim),
            ("x_tautological_fiber_dim", &mut self.x_tautological_fiber_dim),
            ("lhs_center_fiber_dim", &mut self.lhs_center_fiber_dim),
            ("lhs_center_codim", &mut self.lhs_center_codim),
        ]
    }

    pub fn ambient_dim(&self) -> u32 {
        self.dim_b + self.projective_factor_dim
    }

    pub fn dim_d2(&self) -> u32 {
        self.dim_hilb + self.d2_fiber_dim
    }

    /// Problems with the declared facts; empty when consistent.
    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        let (e, f) = (self.map_source_rank, self.map_target_rank);
        let ambient = self.ambient_dim();
        fn check(issues: &mut Vec<String>, what: &str, declared: u32, expected: u32) {
            if declared != expected {
                issues.push(format!("{what}: declared {declared}, expected {expected}"));
            }
        }
        match (corank_codim(e, f, 1), corank_codim(e, f, 2)) {
            (Ok(c1), Ok(c2)) => {
                check(&mut issues, "codim D1 (corank >= 1)", self.codim_d1, c1);
                check(&mut issues, "codim D2 (corank >= 2)", self.codim_d2, c2);
            }
            _ => issues.push(format!("a {e}x{f} map has no corank-2 locus")),
        }
        match corank_codim(e, f, 3) {
            Ok(c3) if c3 > ambient => {}
            Ok(c3) => issues.push(format!("D3 expected codimension {c3} <= {ambient}: D3 may be nonempty")),
            Err(_) => issues.push(format!("a {e}x{f} map has no corank-3 stratum to rule out")),
        }
        check(
            &mut issues,
            "dim D2 = dim Hilb + fiber",
            self.dim_d2(),
            ambient.saturating_sub(self.codim_d2),
        );
        let dim_pbr = self.dim_b + self.r_bundle_rank.saturating_sub(1);
        check(
            &mut issues,
            "dim P_B(R) = dim D1",
            dim_pbr,
            ambient.saturating_sub(self.codim_d1),
        );
        let dim_psy = self.dim_y + self.s_bundle_rank.saturating_sub(1);
        check(
            &mut issues,
            "dim P(S_Y) + codim in P_B(R)",
            dim_psy + self.dprime_first_codim,
            dim_pbr,
        );
        check(
            &mut issues,
            "dim rho^-1(D2) + codim in Bl P_B(R)",
            self.dim_d2() + self.dprime_center_fiber_dim + self.dprime_second_codim,
            dim_pbr,
        );
        check(
            &mut issues,
            "dim X + P^3 x P^1 fibers",
            self.dim_x + self.x_spinor_fiber_dim + self.x_tautological_fiber_dim,
            ambient,
        );
        check(
            &mut issues,
            "dim of left center + codim",
            self.dim_d2() + self.lhs_center_fiber_dim + self.lhs_center_codim,
            ambient,
        );
        issues
    }
}

/// Atoms, declared facts and realizations of the construction.
#[derive(Debug)]
pub struct GmScenario {
    pub facts: GmFacts,
    registry: Registry,
    base: AtlasEntry,
    surface: AtlasEntry,
    hilb_profile: CohomologyProfile,
    cell_factor: AtlasEntry,
}

impl GmScenario {
    pub fn canonical() -> Result<Self> {
        Self::new(GmFacts::default())
    }

    /// `B = Q^6`, `Y = K3`, and `Hilb` a smooth ample divisor in `Hilb^2(Y)`.
    pub fn new(facts: GmFacts) -> Result<Self> {
        Self::with_realizations(facts, atlas::quadric(6)?, atlas::k3())
    }

    pub fn with_realizations(facts: GmFacts, base: AtlasEntry, surface: AtlasEntry) -> Result<Self> {
        let hilb2 = atlas::hilb2_surface(&surface)?;
        let hilb_profile = lefschetz_section_profile(&hilb2.diamond, hilb2.torsion_free)?;
        let cell_factor = atlas::projective_space(facts.projective_factor_dim);

        let registry = Registry::new();
        registry.register(MotiveAtom::new(B, facts.dim_b))?;
        registry.register(MotiveAtom::new(Y, facts.dim_y))?;
        registry.register(MotiveAtom::new(HILB, facts.dim_hilb))?;
        registry.register(MotiveAtom::unknown(X, facts.dim_x))?;
        registry.register(cell_factor.atom.clone())?;
        Ok(Self {
            facts,
            registry,
            base,
            surface,
            hilb_profile,
            cell_factor,
        })
    }

    pub fn with_hilb_profile(mut self, profile: CohomologyProfile) -> Self {
        self.hilb_profile = profile;
        self
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn hilb_profile(&self) -> &CohomologyProfile {
        &self.hilb_profile
    }

    pub fn diamond_table(&self) -> DiamondTable {
        DiamondTable::from([
            (B.to_owned(), self.base.diamond.clone()),
            (Y.to_owned(), self.surface.diamond.clone()),
        ])
    }

    pub fn profile_table(&self) -> ProfileTable {
        ProfileTable::from([
            (B.to_owned(), self.base.profile()),
            (Y.to_owned(), self.surface.profile()),
            (HILB.to_owned(), self.hilb_profile.clone()),
        ])
    }

    /// How atoms are spelled in reports: by the atlas varieties realizing them.
    pub fn display_name(&self, atom: &str) -> String {
        match atom {
            B => dsl_spelling(self.base.name()),
            Y => dsl_spelling(self.surface.name()),
            other => other.to_owned(),
        }
    }

    /// `X -> B + Y * L^2`, the decomposition checked by [`verify_identity`].
    pub fn candidate_x() -> MotiveExpr {
        MotiveExpr::atom(B) + MotiveExpr::atom(Y).twist(TatePolynomial::lefschetz(2))
    }

    fn builder(&self, strict: bool) -> Builder<'_> {
        Builder { scenario: self, strict }
    }
}

fn dsl_spelling(name: &str) -> String {
    for prefix in ["P", "Q"] {
        if let Some(rest) = name.strip_prefix(prefix) {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                return format!("{prefix}({rest})");
            }
        }
    }
    name.to_owned()
}

struct Builder<'a> {
    scenario: &'a GmScenario,
    strict: bool,
}

impl Builder<'_> {
    fn bl(&self, ambient: &MotiveExpr, center: &MotiveExpr, codim: u32) -> Result<MotiveExpr> {
        if self.strict {
            blow_up(&self.scenario.registry, ambient, center, codim)
        } else {
            Ok(blow_up_formula(ambient, center, codim))
        }
    }

    fn pb(&self, base: &MotiveExpr, rank: u32) -> Result<MotiveExpr> {
        if self.strict {
            projective_bundle(base, rank)
        } else {
            Ok(p_fibration(base, rank.saturating_sub(1)))
        }
    }

    fn rhs(&self) -> Result<RhsStages> {
        let f = &self.scenario.facts;
        let b = MotiveExpr::atom(B);
        let y = MotiveExpr::atom(Y);
        let ambient = kunneth(
            &self.scenario.registry,
            &b,
            &MotiveExpr::atom(self.scenario.cell_factor.name()),
        )?;
        let d2 = p_fibration(&MotiveExpr::atom(HILB), f.d2_fiber_dim);
        let pb_r = self.pb(&b, f.r_bundle_rank)?;
        let ps_y = self.pb(&y, f.s_bundle_rank)?;
        let bl_psy = self.bl(&pb_r, &ps_y, f.dprime_first_codim)?;
        let dprime = self.bl(
            &bl_psy,
            &p_fibration(&d2, f.dprime_center_fiber_dim),
            f.dprime_second_codim,
        )?;
        let bl_d2 = self.bl(&ambient, &d2, f.codim_d2)?;
        let top = self.bl(&bl_d2, &dprime, f.codim_d1)?;
        Ok(RhsStages {
            ambient,
            d2,
            dprime,
            bl_d2,
            top,
        })
    }

    fn lhs(&self) -> Result<LhsStages> {
        let f = &self.scenario.facts;
        let x = MotiveExpr::unknown(X);
        let fibration = p_fibration(&p_fibration(&x, f.x_spinor_fiber_dim), f.x_tautological_fiber_dim);
        let d2 = p_fibration(&MotiveExpr::atom(HILB), f.d2_fiber_dim);
        let center = p_fibration(&d2, f.lhs_center_fiber_dim);
        let top = self.bl(&fibration, &center, f.lhs_center_codim)?;
        Ok(LhsStages { fibration, center, top })
    }
}

/// Intermediate varieties of the right route.
#[derive(Debug, Clone)]
pub struct RhsStages {
    /// `B x P(V_5)`.
    pub ambient: MotiveExpr,
    pub d2: MotiveExpr,
    pub dprime: MotiveExpr,
    pub bl_d2: MotiveExpr,
    pub top: MotiveExpr,
}

/// Intermediate varieties of the left route.
#[derive(Debug, Clone)]
pub struct LhsStages {
    /// `P(S_X) x_X P_X(U_X)`.
    pub fibration: MotiveExpr,
    /// The `P^2`-fibration over `D_2`.
    pub center: MotiveExpr,
    pub top: MotiveExpr,
}

fn check_facts(s: &GmScenario) -> Result<()> {
    let issues = s.facts.validate();
    if issues.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidScenario(issues))
    }
}

pub fn rhs_stages(s: &GmScenario) -> Result<RhsStages> {
    check_facts(s)?;
    s.builder(true).rhs()
}

pub fn lhs_stages(s: &GmScenario) -> Result<LhsStages> {
    check_facts(s)?;
    s.builder(true).lhs()
}

/// The tenfold reached from `B x P(V_5)` by blowing up `D_2`, then `D'_1`.
pub fn build_rhs(s: &GmScenario) -> Result<MotiveExpr> {
    Ok(rhs_stages(s)?.top)
}

/// The same tenfold reached from `X`.
pub fn build_lhs(s: &GmScenario) -> Result<MotiveExpr> {
    Ok(lhs_stages(s)?.top)
}

/// The right route with its two outer blow-ups performed in the opposite
/// order (`D'_1` first, then `D_2`), as a normal form.
pub fn rhs_swapped_order(s: &GmScenario) -> Result<NormalForm> {
    let st = rhs_stages(s)?;
    let f = &s.facts;
    let first = blow_up_formula(&st.ambient, &st.dprime, f.codim_d1);
    Ok(normalize(&blow_up_formula(&first, &st.d2, f.codim_d2)))
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub ok: bool,
    pub lhs: NormalForm,
    pub rhs: NormalForm,
    /// The left side after `X -> B + Y*L^2`.
    pub lhs_substituted: NormalForm,
    /// Atoms whose coefficients differ between the two sides.
    pub differing: Vec<String>,
    /// Fact-validation and construction problems.
    pub diagnostics: Vec<String>,
}

/// Checks both routes agree once `X` is replaced by `B + Y*L^2`. Never fails:
/// inconsistent facts make the report negative, with normal forms still
/// computed from the declared values.
pub fn verify_identity(s: &GmScenario) -> IdentityReport {
    let mut diagnostics = s.facts.validate();
    if diagnostics.is_empty() {
        if let Err(e) = s.builder(true).rhs() {
            diagnostics.push(format!("right route: {e}"));
        }
        if let Err(e) = s.builder(true).lhs() {
            diagnostics.push(format!("left route: {e}"));
        }
    }
    let loose = s.builder(false);
    let (lhs_expr, rhs_expr) = match (loose.lhs(), loose.rhs()) {
        (Ok(l), Ok(r)) => (l.top, r.top),
        (l, r) => {
            for e in [l.err(), r.err()].into_iter().flatten() {
                diagnostics.push(e.to_string());
            }
            return IdentityReport {
                ok: false,
                lhs: NormalForm::new(),
                rhs: NormalForm::new(),
                lhs_substituted: NormalForm::new(),
                differing: Vec::new(),
                diagnostics,
            };
        }
    };
    let lhs = normalize(&lhs_expr);
    let rhs = normalize(&rhs_expr);
    let lhs_substituted = normalize(&lhs_expr.substitute(X, &GmScenario::candidate_x()));
    let mut names: Vec<&str> = lhs_substituted.names().chain(rhs.names()).collect();
    names.sort_unstable();
    names.dedup();
    let differing: Vec<String> = names
        .into_iter()
        .filter(|n| lhs_substituted.coeff(n) != rhs.coeff(n))
        .map(str::to_owned)
        .collect();
    IdentityReport {
        ok: diagnostics.is_empty() && differing.is_empty(),
        lhs,
        rhs,
        lhs_substituted,
        differing,
        diagnostics,
    }
}

/// `M(X)` by cancelling the `Hilb` summand and the factor `M_1`.
pub fn solve_mx(s: &GmScenario) -> Result<Solution> {
    let lhs = normalize(&build_lhs(s)?);
    let rhs = normalize(&build_rhs(s)?);
    let (m1, m2) = lhs.split_off(X);
    solve_tensor_factor(X, &m1, &m2, &rhs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateStep {
    pub claim: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionCertificate {
    pub steps: Vec<CertificateStep>,
    pub atoms: BTreeMap<String, Torsion>,
    pub conclusion: Torsion,
}

impl TorsionCertificate {
    pub fn require_free(&self) -> Result<()> {
        match self.atoms.iter().find(|(_, t)| **t != Torsion::Free) {
            Some((name, _)) => Err(Error::UnknownTorsion(name.clone())),
            None if self.conclusion == Torsion::Free => Ok(()),
            None => Err(Error::UnknownTorsion(X.to_owned())),
        }
    }
}

/// Torsion-freeness of `H^*(X, Z)`: `X` is a direct summand (coefficient
/// containing `1`) of a variety whose cohomology is a sum of Tate twists of
/// torsion-free pieces.
pub fn torsion_report(s: &GmScenario) -> Result<TorsionCertificate> {
    let lhs = normalize(&build_lhs(s)?);
    let rhs = normalize(&build_rhs(s)?);
    let table = s.profile_table();
    let mut steps = Vec::new();

    let x_coeff = lhs.coeff(X);
    let embeds = x_coeff.coeff(0).bits() > 0;
    steps.push(CertificateStep {
        claim: format!(
            "H(X) is a direct summand of the top variety: X has coefficient {x_coeff} on the fibration/blow-up side, which contains 1"
        ),
        holds: embeds,
    });

    let mut atoms = BTreeMap::new();
    for name in rhs.names() {
        let profile = table
            .get(name)
            .ok_or_else(|| Error::MissingRealization(name.to_owned()))?;
        let torsion = profile.torsion();
        let why = match name {
            B => format!("{} is cellular", s.display_name(B)),
            Y => format!("{} has torsion-free cohomology", s.display_name(Y)),
            HILB => format!(
                "Hilb is a smooth ample divisor in Hilb^2({}): Lefschetz hyperplane + universal coefficients ({})",
                s.display_name(Y),
                profile
            ),
            other => format!("profile of {other}"),
        };
        steps.push(CertificateStep {
            claim: format!("H({name}) torsion {torsion}: {why}"),
            holds: torsion == Torsion::Free,
        });
        atoms.insert(name.to_owned(), torsion);
    }

    let all_free = atoms.values().all(|t| *t == Torsion::Free);
    let conclusion = if embeds && all_free {
        Torsion::Free
    } else {
        Torsion::Unknown
    };
    steps.push(CertificateStep {
        claim: "a sum of Tate twists of torsion-free groups is torsion-free, and so is any direct summand".into(),
        holds: conclusion == Torsion::Free,
    });
    Ok(TorsionCertificate {
        steps,
        atoms,
        conclusion,
    })
}

/// Expected codimensions of the corank strata, `k = 1, 2, 3`, and whether
/// the corank-3 stratum exceeds the ambient dimension.
pub fn codimension_gates(facts: &GmFacts) -> Result<(Vec<(u32, u32)>, bool)> {
    let gates = (1..=3)
        .map(|k| Ok((k, corank_codim(facts.map_source_rank, facts.map_target_rank, k)?)))
        .collect::<Result<Vec<_>>>()?;
    let d3_empty = gates[2].1 > facts.ambient_dim();
    Ok((gates, d3_empty))
}

#[derive(Debug, Clone, Serialize)]
pub struct SolvedSection {
    pub normal_form: NormalForm,
    pub expression: String,
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct HodgeSection {
    pub diamond: HodgeDiamond,
    pub betti: Vec<u64>,
    pub euler: i64,
    pub euler_parts: BTreeMap<String, i64>,
    /// `h^{p,q}(X) = h^{p,q}(B) + h^{p-2,q-2}(Y)` entrywise.
    pub hodge_formula_holds: bool,
    pub symmetric: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GmReport {
    pub schema: &'static str,
    pub facts: GmFacts,
    pub codimensions: Vec<(u32, u32)>,
    pub d3_empty: bool,
    pub identity: IdentityReport,
    pub solved: Option<SolvedSection>,
    pub hodge: Option<HodgeSection>,
    pub total_profile: Option<String>,
    pub torsion: Option<TorsionCertificate>,
    pub errors: Vec<String>,
}

impl GmReport {
    pub fn ok(&self) -> bool {
        self.identity.ok
            && self.errors.is_empty()
            && self.torsion.as_ref().is_some_and(|t| t.conclusion == Torsion::Free)
    }

    pub fn summary_line(&self) -> String {
        let identity = if self.identity.ok { "OK" } else { "FAILED" };
        let mx = self
            .solved
            .as_ref()
            .map_or("unsolved".to_owned(), |s| s.expression.clone());
        let torsion = self.torsion.as_ref().map_or(Torsion::Unknown, |t| t.conclusion);
        format!("identity: {identity}; M(X) = {mx}; torsion: {torsion}")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "GM sixfold verification ({})", self.schema);
        let gates: Vec<String> = self
            .codimensions
            .iter()
            .map(|(k, c)| format!("corank>={k}: {c}"))
            .collect();
        let _ = writeln!(out, "codimensions: {} (D3 empty: {})", gates.join(", "), self.d3_empty);
        let _ = writeln!(out, "left  (fibration over X): {}", self.identity.lhs);
        let _ = writeln!(out, "right (blow-ups of B x P4): {}", self.identity.rhs);
        let _ = writeln!(out, "left with X -> B + Y*L^2: {}", self.identity.lhs_substituted);
        for d in &self.identity.diagnostics {
            let _ = writeln!(out, "diagnostic: {d}");
        }
        if !self.identity.differing.is_empty() {
            let _ = writeln!(out, "differing atoms: {}", self.identity.differing.join(", "));
        }
        if let Some(s) = &self.solved {
            let _ = writeln!(out, "solved: M(X) = {} [{}]", s.normal_form, s.expression);
            let _ = writeln!(out, "note: {}", s.provenance);
        }
        if let Some(h) = &self.hodge {
            let _ = writeln!(out, "Hodge diamond of X:\n{}", h.diamond.pretty());
            let betti: Vec<String> = h.betti.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "betti: ({})", betti.join(","));
            let parts: Vec<String> = h.euler_parts.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "euler: {} ({})", h.euler, parts.join(" + "));
            let _ = writeln!(out, "h^pq(X) = h^pq(B) + h^(p-2,q-2)(Y): {}", h.hodge_formula_holds);
        }
        if let Some(p) = &self.total_profile {
            let _ = writeln!(out, "top variety cohomology: {p}");
        }
        if let Some(t) = &self.torsion {
            for (i, step) in t.steps.iter().enumerate() {
                let mark = if step.holds { "ok" } else { "--" };
                let _ = writeln!(out, "torsion step {} [{mark}]: {}", i + 1, step.claim);
            }
        }
        for e in &self.errors {
            let _ = writeln!(out, "error: {e}");
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }
}

/// Runs every stage of the verification and collects the results.
pub fn run(s: &GmScenario) -> GmReport {
    let mut errors = Vec::new();
    let (codimensions, d3_empty) = codimension_gates(&s.facts).unwrap_or_else(|e| {
        errors.push(e.to_string());
        (Vec::new(), false)
    });
    let identity = verify_identity(s);

    let solved = if identity.ok {
        match solve_mx(s) {
            Ok(sol) => Some(sol),
            Err(e) => {
                errors.push(format!("solve: {e}"));
                None
            }
        }
    } else {
        None
    };

    let hodge = solved.as_ref().and_then(|sol| match hodge_section(s, &sol.value) {
        Ok(h) => Some(h),
        Err(e) => {
            errors.push(format!("hodge: {e}"));
            None
        }
    });

    let total_profile = if identity.ok {
        realize_profile(&identity.rhs, &s.profile_table())
            .map(|p| p.to_string())
            .ok()
    } else {
        None
    };

    let torsion = if identity.ok {
        match torsion_report(s) {
            Ok(t) => Some(t),
            Err(e) => {
                errors.push(format!("torsion: {e}"));
                None
            }
        }
    } else {
        None
    };

    GmReport {
        schema: REPORT_SCHEMA,
        facts: s.facts.clone(),
        codimensions,
        d3_empty,
        identity,
        solved: solved.map(|sol| SolvedSection {
            expression: sol.value.render_with(|n| s.display_name(n)),
            normal_form: sol.value,
            provenance: sol.provenance,
        }),
        hodge,
        total_profile,
        torsion,
        errors,
    }
}

fn hodge_section(s: &GmScenario, mx: &NormalForm) -> Result<HodgeSection> {
    let table = s.diamond_table();
    let diamond = realize_hodge(mx, &table)?;
    let b = &table[B];
    let y_shifted = twist_diamond(&table[Y], 2);
    let n = diamond.n() as i64;
    let hodge_formula_holds = b.n() == diamond.n()
        && (0..=n).all(|p| (0..=n).all(|q| diamond.get(p, q) == b.get(p, q) + y_shifted.get(p, q)));
    let euler_parts = mx
        .names()
        .map(|name| (s.display_name(name), table[name].euler()))
        .collect();
    Ok(HodgeSection {
        betti: diamond.betti(),
        euler: diamond.euler(),
        euler_parts,
        hodge_formula_holds,
        symmetric: check_symmetries(&diamond),
        diamond,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[u32]) -> TatePolynomial {
        TatePolynomial::from_dense(c.iter().copied())
    }

    fn m1() -> TatePolynomial {
        p(&[1, 2, 2, 2, 1])
    }

    fn hilb_coeff() -> TatePolynomial {
        p(&[0, 1, 3, 5, 5, 3, 1])
    }

    #[test]
    fn canonical_facts_are_consistent() {
        assert!(GmFacts::default().validate().is_empty());
        assert_eq!(GmFacts::default().dim_d2(), 4);
    }

    #[test]
    fn rhs_intermediates() {
        let s = GmScenario::canonical().unwrap();
        let st = rhs_stages(&s).unwrap();
        assert_eq!(normalize(&st.d2), NormalForm::single(HILB, p(&[1, 1])));
        assert_eq!(
            normalize(&st.dprime),
            NormalForm::from_terms([
                (B, p(&[1, 1, 1])),
                (Y, p(&[0, 1, 2, 2, 2, 1])),
                (HILB, p(&[0, 1, 3, 3, 1])),
            ])
        );
        assert_eq!(
            normalize(&st.ambient),
            NormalForm::single(B, TatePolynomial::range(0, 4))
        );
    }

    #[test]
    fn rhs_and_lhs() {
        let s = GmScenario::canonical().unwrap();
        assert_eq!(
            normalize(&build_rhs(&s).unwrap()),
            NormalForm::from_terms([(B, m1()), (Y, p(&[0, 0, 1, 2, 2, 2, 1])), (HILB, hilb_coeff())])
        );
        let lhs = lhs_stages(&s).unwrap();
        assert_eq!(normalize(&lhs.fibration), NormalForm::single(X, m1()));
        assert_eq!(
            normalize(&lhs.top),
            NormalForm::from_terms([(X, m1()), (HILB, hilb_coeff())])
        );
        assert_eq!(crate::motive::dim_of(&lhs.center, s.registry()).unwrap(), 6);
    }

    #[test]
    fn identity_and_solve() {
        let s = GmScenario::canonical().unwrap();
        let report = verify_identity(&s);
        assert!(report.ok, "{report:?}");
        let sol = solve_mx(&s).unwrap();
        assert_eq!(
            sol.value,
            NormalForm::from_terms([(B, TatePolynomial::one()), (Y, TatePolynomial::lefschetz(2))])
        );
        assert_eq!(sol.value.render_with(|n| s.display_name(n)), "Q(6) + K3*L^2");
    }

    #[test]
    fn perturbed_codim_d2_differs_in_hilb() {
        let facts = GmFacts {
            codim_d2: 5,
            ..GmFacts::default()
        };
        let s = GmScenario::new(facts).unwrap();
        let report = verify_identity(&s);
        assert!(!report.ok);
        assert_eq!(report.differing, vec![HILB.to_owned()]);
        assert!(!report.diagnostics.is_empty());
        assert!(matches!(build_rhs(&s), Err(Error::InvalidScenario(_))));
    }

    #[test]
    fn point_surface_fails() {
        let facts = GmFacts {
            dim_y: 0,
            ..GmFacts::default()
        };
        let s = GmScenario::new(facts).unwrap();
        assert!(!verify_identity(&s).ok);
    }

    #[test]
    fn torsion_certificate() {
        let s = GmScenario::canonical().unwrap();
        let cert = torsion_report(&s).unwrap();
        assert_eq!(cert.conclusion, Torsion::Free);
        assert!(cert.require_free().is_ok());
        assert_eq!(cert.atoms.len(), 3);

        let forced = GmScenario::canonical()
            .unwrap()
            .with_hilb_profile(s.hilb_profile().clone().with_torsion(Torsion::Unknown));
        let cert = torsion_report(&forced).unwrap();
        assert_eq!(cert.conclusion, Torsion::Unknown);
        assert_eq!(cert.require_free(), Err(Error::UnknownTorsion(HILB.into())));

        let mut shady = atlas::k3();
        shady.torsion_free = false;
        let s = GmScenario::with_realizations(GmFacts::default(), atlas::quadric(6).unwrap(), shady).unwrap();
        assert_eq!(torsion_report(&s).unwrap().conclusion, Torsion::Unknown);
    }

    #[test]
    fn full_run_summary() {
        let report = run(&GmScenario::canonical().unwrap());
        assert!(report.ok());
        assert!(report
            .to_text()
            .ends_with("identity: OK; M(X) = Q(6) + K3*L^2; torsion: FREE\n"));
        let h = report.hodge.unwrap();
        assert!(h.hodge_formula_holds);
        assert_eq!(h.euler, 32);
    }

    #[test]
    fn swapped_outer_blow_ups_agree() {
        let s = GmScenario::canonical().unwrap();
        assert_eq!(rhs_swapped_order(&s).unwrap(), normalize(&build_rhs(&s).unwrap()));
    }
}
