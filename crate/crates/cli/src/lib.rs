//! Batch front end for `bsurf-core`: loads scenario files, runs the
//! library, and produces [`report::Report`]s.
//!
//! Exit codes: 0 success, 2 schema error, 3 precondition or cap violation,
//! 4 a computed result contradicts a proved statement.

use bsurf_core::brauer::{
    brauer_n_torsion_bound, c_constant, field_degree_budget, h1_integer_action_capped, over_q_bound,
    IntegerActionGroup, SurfaceKind, SurfaceScenario, INTEGER_ACTION_CAP,
};
use bsurf_core::gl2::{
    classify_abelian, classify_finite_real, commutant, enumerate_abelian, order_histogram, FiniteRealGroup,
    MatrixGroup, QuadInt, RealQuadMatrix, DEFAULT_CLOSURE_CAP,
};
use bsurf_core::lattice::{build_family_gram, build_kummer_lattice, build_lambda_prod, lattice_report};
use bsurf_core::modring::{AbelianShape, Modulus, ResidueMatrix};
use bsurf_core::torsionhom::random::{random_instance, rng_from_seed};
use bsurf_core::torsionhom::{
    divisibility_check_rational, divisibility_check_twisted, end_report, hom_to_end_sequence, invariant_homs,
    transcendental_quotient, IsogenyData, PairAction,
};
use bsurf_core::Error;

pub mod report;
pub mod schema;

use report::*;
use schema::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_THEOREM: i32 = 4;

/// Seed used by randomized scenarios when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1729;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Library(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) | CliError::Io { .. } => EXIT_SCHEMA,
            CliError::Library(e) if e.is_theorem_violation() => EXIT_THEOREM,
            CliError::Library(_) => EXIT_PRECONDITION,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    /// Closure cap; `None` uses the library default.
    pub cap: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: DEFAULT_SEED, cap: None }
    }
}

/// A report and the exit code it carries. Only `end-invariants` can return a
/// report together with a nonzero code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, exit_code: EXIT_OK }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeSelector {
    FamilyD(u64),
    Kummer,
    LambdaProd,
}

/// Orders and determinants are reported as 64-bit integers.
fn fit<T: TryInto<U>, U>(x: T, what: &'static str) -> CliResult<U> {
    x.try_into().map_err(|_| Error::Overflow(what).into())
}

fn modulus(n: u64) -> CliResult<Modulus> {
    Ok(Modulus::new(n)?)
}

fn residue(m: Modulus, a: &Mat2) -> ResidueMatrix {
    ResidueMatrix::new(m, [a[0][0], a[0][1], a[1][0], a[1][1]])
}

fn residues(a: &ResidueMatrix) -> Residues {
    let [w, x, y, z] = a.entries();
    [[w, x], [y, z]]
}

fn group(m: Modulus, gens: &[Mat2], opts: &Options) -> CliResult<MatrixGroup> {
    let gens = gens.iter().map(|g| residue(m, g)).collect();
    Ok(MatrixGroup::new(m, gens, opts.cap.unwrap_or(DEFAULT_CLOSURE_CAP))?)
}

fn prime_power(m: Modulus) -> CliResult<(u64, u32)> {
    m.prime_power()
        .ok_or_else(|| Error::Precondition(format!("modulus {} is not a prime power", m.get())).into())
}

pub fn run_scenario(s: &Scenario, opts: &Options) -> CliResult<Outcome> {
    match s {
        Scenario::Commutant(c) => run_commutant(c).map(Into::into),
        Scenario::EndInvariants(g) => run_end(g, opts),
        Scenario::HomInvariants(h) => run_hom(h, opts).map(Into::into),
        Scenario::ClassifyAbelian(g) => run_classify(g, opts).map(Into::into),
        Scenario::BrauerBound(b) => run_brauer(b, opts).map(Into::into),
        Scenario::H1Bound(h) => run_h1(h, opts).map(Into::into),
        Scenario::FiniteGl2r(r) => run_real(r).map(Into::into),
    }
}

/// Reads `path`, checks it is a `command` scenario, and runs it.
pub fn run_file(path: &str, command: &str, opts: &Options) -> CliResult<Outcome> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    run_scenario(&parse_for(&text, command)?, opts)
}

fn run_commutant(c: &CommutantInput) -> CliResult<Report> {
    let m = modulus(c.modulus)?;
    let (ell, s) = prime_power(m)?;
    let r = commutant(&residue(m, &c.matrix), ell, s)?;
    Ok(Report::Commutant(CommutantReport {
        modulus: m.get(),
        ell,
        s,
        mu: r.mu,
        a_prime: r.a_prime.as_ref().map(residues),
        generators: r.generators.iter().map(residues).collect(),
        shape: r.shape.factors().to_vec(),
        order: fit(r.shape.order(), "commutant order")?,
    }))
}

fn run_end(g: &GroupInput, opts: &Options) -> CliResult<Outcome> {
    let m = modulus(g.modulus)?;
    let r = end_report(&group(m, &g.generators, opts)?)?;
    let agree = r.agrees();
    let report = Report::EndInvariants(EndReportOut {
        n: m.get(),
        n1: r.structure.n1,
        n2: r.structure.n2,
        scan_n1: r.scan_n1,
        scan_n2: r.scan_n2,
        shape: r.shape.factors().to_vec(),
        agree,
    });
    Ok(Outcome { report, exit_code: if agree { EXIT_OK } else { EXIT_THEOREM } })
}

fn build_action(
    m: Modulus,
    d: u64,
    pairs: &Option<Vec<PairInput>>,
    phi: &Option<Mat2>,
    phi_dual: &Option<Mat2>,
    random: &Option<RandomAction>,
    opts: &Options,
) -> CliResult<(PairAction, IsogenyData)> {
    if let Some(r) = random {
        if pairs.is_some() || phi.is_some() || phi_dual.is_some() {
            return Err(CliError::Schema("`random` excludes `pairs`, `phi` and `phi_dual`".into()));
        }
        let inst = random_instance(&mut rng_from_seed(opts.seed), m, d, r.twisted)?;
        return Ok((inst.action, inst.iso));
    }
    let iso = match (phi, phi_dual) {
        (None, None) => IsogenyData::canonical(m, d)?,
        (Some(p), Some(q)) => IsogenyData::new(d, residue(m, p), residue(m, q))?,
        _ => return Err(CliError::Schema("`phi` and `phi_dual` must be given together".into())),
    };
    let pairs = pairs
        .iter()
        .flatten()
        .map(|p| (residue(m, &p.source), residue(m, &p.target), p.chi))
        .collect();
    let action = PairAction::new(m, pairs)?;
    iso.check_equivariant(&action)?;
    Ok((action, iso))
}

fn run_hom(h: &HomInput, opts: &Options) -> CliResult<Report> {
    let m = modulus(h.modulus)?;
    let (action, iso) = build_action(m, h.d, &h.pairs, &h.phi, &h.phi_dual, &h.random, opts)?;
    let homs = invariant_homs(&action)?;
    let q = transcendental_quotient(&action, &iso)?;
    let seq = hom_to_end_sequence(&action, &iso)?;
    let f = |s: &AbelianShape| s.factors().to_vec();
    let divisibility = if action.twist_nontrivial() {
        let c = divisibility_check_twisted(&action, &iso)?;
        Divisibility::Twisted { hom_quotient: f(&c.hom_quotient), end_ratio: f(&c.end_ratio), kernel: f(&c.kernel) }
    } else {
        let c = divisibility_check_rational(&action, &iso)?;
        Divisibility::Rational {
            hom_quotient: f(&c.hom_quotient),
            end_quotient: f(&c.end_quotient),
            kernel: f(&c.kernel),
            cokernel: f(&c.cokernel),
        }
    };
    Ok(Report::HomInvariants(HomReport {
        modulus: m.get(),
        d: iso.degree(),
        m: iso.m(),
        twisted: action.twist_nontrivial(),
        phi: residues(&iso.phi()),
        phi_dual: residues(&iso.phi_dual()),
        pairs: action
            .pairs()
            .iter()
            .map(|(a, b, chi)| Pair { source: residues(a), target: residues(b), chi: *chi })
            .collect(),
        invariant_homs: f(&homs.shape),
        transcendental_quotient: f(&q),
        transcendental_order: fit(q.order(), "quotient order")?,
        sequence_left: f(&seq.left),
        sequence_image: f(&seq.h),
        divisibility,
    }))
}

fn run_classify(g: &GroupInput, opts: &Options) -> CliResult<Report> {
    let m = modulus(g.modulus)?;
    let (ell, s) = prime_power(m)?;
    let h = group(m, &g.generators, opts)?;
    let tag = classify_abelian(&h, ell, s)?;
    let elements = h.closure()?;
    for x in elements {
        if !tag.maps_into_family(x)? {
            return Err(Error::TheoremViolation(format!(
                "conjugator {:?} does not map {:?} into {}",
                residues(&tag.conjugator),
                residues(x),
                tag.kind
            ))
            .into());
        }
    }
    Ok(Report::ClassifyAbelian(ClassifyReport {
        modulus: m.get(),
        ell,
        s,
        level: tag.level,
        family: tag.kind.to_string(),
        conjugator: residues(&tag.conjugator),
        elements_checked: elements.len(),
    }))
}

pub fn run_enumerate(ell: u64, s: u32) -> CliResult<Report> {
    let census = enumerate_abelian(ell, s)?;
    let orders = order_histogram(&census)
        .into_iter()
        .map(|(order, (classes, subgroups))| OrderRow { order, classes, subgroups })
        .collect();
    let mut families = std::collections::BTreeMap::new();
    for c in &census.classes {
        let tag = classify_abelian(&c.group(), ell, s)?;
        *families.entry(tag.kind).or_insert(0usize) += 1;
    }
    Ok(Report::EnumerateAbelian(EnumerateReport {
        ell,
        s,
        ambient_order: census.ambient_order,
        classes: census.classes.len(),
        subgroups: census.total_subgroups(),
        max_order: census.max_order,
        bound: census.bound,
        orders,
        normal_forms: families.into_iter().map(|(k, classes)| FamilyRow { family: k.to_string(), classes }).collect(),
    }))
}

fn run_brauer(b: &BrauerInput, opts: &Options) -> CliResult<Report> {
    let m = modulus(b.modulus)?;
    let (action, iso) = build_action(m, b.d, &b.pairs, &b.phi, &b.phi_dual, &b.random, opts)?;
    let twisted = action.twist_nontrivial();
    let kind = match b.surface {
        SurfaceInput::AbelianTorsor => SurfaceKind::AbelianTorsor,
        SurfaceInput::Kummer => SurfaceKind::KummerK3,
    };
    let scenario = SurfaceScenario::new(m, b.d, b.period, twisted, b.base_change_degree, kind)?;
    let cap = opts.cap.unwrap_or(DEFAULT_CLOSURE_CAP);
    let end = end_report(&MatrixGroup::new(m, action.target_images(), cap)?)?.structure;
    let kernel_end = if twisted {
        Some(end_report(&MatrixGroup::new(m, action.kernel_target_images(), cap)?)?.structure)
    } else {
        None
    };
    let cert = brauer_n_torsion_bound(&scenario, &end, kernel_end.as_ref())?;
    let q = transcendental_quotient(&action, &iso)?;
    Ok(Report::BrauerBound(BrauerReport {
        modulus: m.get(),
        d: b.d,
        period: b.period,
        base_change_degree: b.base_change_degree,
        surface: match kind {
            SurfaceKind::AbelianTorsor => "abelian-torsor".into(),
            SurfaceKind::KummerK3 => "kummer".into(),
        },
        twisted,
        n1: end.n1,
        n2: end.n2,
        kernel_n1: kernel_end.map(|k| k.n1),
        kernel_n2: kernel_end.map(|k| k.n2),
        field_degree_budget: field_degree_budget(&scenario)?,
        c: c_constant(&scenario)?,
        factors: cert
            .factors
            .iter()
            .map(|f| FactorOut { label: f.label.clone(), value: f.value.to_string() })
            .collect(),
        bound: cert.bound.to_string(),
        exact: cert.embedding_is_isomorphism,
        status: if cert.embedding_is_isomorphism { "exact" } else { "upper bound only" }.into(),
        hom_quotient_order: fit(q.order(), "quotient order")?,
    }))
}

pub fn run_over_q(d: u64) -> CliResult<Report> {
    let b = over_q_bound(d)?;
    Ok(Report::OverQ(OverQReport { d, max_order: b.max_order, bound: b.bound.to_string() }))
}

pub fn run_lattice(sel: LatticeSelector) -> CliResult<Report> {
    let l = match sel {
        LatticeSelector::FamilyD(d) => build_family_gram(d)?,
        LatticeSelector::Kummer => build_kummer_lattice()?,
        LatticeSelector::LambdaProd => build_lambda_prod()?,
    };
    let r = lattice_report(&l)?;
    Ok(Report::Lattice(LatticeOut {
        label: r.label,
        rank: r.rank,
        determinant: fit(r.determinant, "determinant")?,
        even: r.even,
        positive: r.signature.0,
        negative: r.signature.1,
        degenerate: r.degenerate,
    }))
}

fn run_h1(h: &H1Input, opts: &Options) -> CliResult<Report> {
    let r = h.rank;
    let mut gens = Vec::with_capacity(h.generators.len());
    for (i, g) in h.generators.iter().enumerate() {
        if g.len() != r || g.iter().any(|row| row.len() != r) {
            return Err(CliError::Schema(format!("generator {i} is not {r} x {r}")));
        }
        gens.push(g.concat());
    }
    let group = IntegerActionGroup::new(r, gens)?;
    let rep = h1_integer_action_capped(&group, opts.cap.unwrap_or(INTEGER_ACTION_CAP))?;
    let divides = rep.group_order.checked_pow(r as u32).ok_or(Error::Overflow("|G|^r"))?;
    Ok(Report::H1Bound(H1Out {
        rank: r,
        group_order: rep.group_order,
        fixed_mod_order: fit(rep.fixed_mod_order, "fixed points")?,
        fixed_lattice_rank: rep.fixed_lattice_rank,
        h1_order: fit(rep.h1_order, "H1 order")?,
        divides,
    }))
}

fn run_real(r: &RealInput) -> CliResult<Report> {
    let gens = r
        .generators
        .iter()
        .map(|g| {
            let q = |e: QuadEntry| {
                let (a, b) = e.parts();
                QuadInt::new(a, b)
            };
            RealQuadMatrix::new(r.d, [q(g[0][0]), q(g[0][1]), q(g[1][0]), q(g[1][1])])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let g = classify_finite_real(&gens)?;
    let order = match g {
        FiniteRealGroup::Cyclic(k) | FiniteRealGroup::Dihedral(k) => k,
    };
    Ok(Report::FiniteGl2r(RealReport { d: r.d, group: g.to_string(), order }))
}
