//! Finite-window analysis of intermediate-series modules.
//!
//! A [`Window`] is the index set `{n·a : |n| ≤ bound}` of a cyclic group
//! `aℤ`. Generators act on it with truncation: `x·v_q` is kept only when
//! both `q` and the target index lie in the window. Everything here is exact
//! and deterministic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{AlgebraElement, BasisKey, PhiVariant, RescalingMap};
use crate::groups::{GroupError, SubgroupSpec};
use crate::intermediate::{
    act, Classification, IsoWitness, ModuleError, ModuleParams, Verdict, WeightVector,
};
use crate::scalar::{Rational, RationalParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("windows need a cyclic group, got {0}")]
    NonCyclicWindow(SubgroupSpec),
    #[error("window bound must be at least {min}, got {got}")]
    BoundTooSmall { min: u32, got: u32 },
    #[error("window group {window} is not contained in the module group {module}")]
    WindowOutsideModule { window: SubgroupSpec, module: SubgroupSpec },
    #[error("index {0} is not in the window")]
    IndexOutsideWindow(Rational),
    #[error("{sub} is not a subgroup of {group}")]
    NotSubgroup { sub: SubgroupSpec, group: SubgroupSpec },
    #[error("shift {0} is not in the module group")]
    ShiftOutsideGroup(Rational),
    #[error("window scan is inconclusive: closure of v({seed}) has dimension {dim} of {size}")]
    Inconclusive { seed: Rational, dim: usize, size: usize },
    #[error("table is not an intermediate-series module: {0}")]
    NotIntermediateSeries(String),
    #[error("table does not determine the parameters: {0}")]
    Ambiguous(String),
    #[error("basis scaling is not constant: c({0}) != c({1})")]
    NonConstantScaling(Rational, Rational),
    #[error("reference and candidate share fewer than 2 indices")]
    DisjointOverlap,
    #[error("candidate vector at {0} is not a multiple of the reference vector")]
    NotProportional(Rational),
    #[error("basis alignment needs F != 0")]
    ZeroHeisenbergCharge,
    #[error("malformed table at line {line}: {message}")]
    TableSyntax { line: usize, message: String },
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// Finite index set `{n·a : |n| ≤ bound}` inside a cyclic group `aℤ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Window {
    group: SubgroupSpec,
    step: Rational,
    bound: u32,
}

impl Window {
    pub fn new(group: SubgroupSpec, bound: u32) -> Result<Self, AnalysisError> {
        let step =
            group.cyclic_generator().cloned().ok_or_else(|| AnalysisError::NonCyclicWindow(group.clone()))?;
        if bound == 0 {
            return Err(AnalysisError::BoundTooSmall { min: 1, got: 0 });
        }
        Ok(Window { group, step, bound })
    }

    /// Window over ℤ.
    pub fn integers(bound: u32) -> Result<Self, AnalysisError> {
        Self::new(SubgroupSpec::integers(), bound)
    }

    pub fn group(&self) -> &SubgroupSpec {
        &self.group
    }

    pub fn step(&self) -> &Rational {
        &self.step
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn size(&self) -> usize {
        2 * self.bound as usize + 1
    }

    pub fn contains(&self, q: &Rational) -> bool {
        let n = q / &self.step;
        n.is_integer() && n.abs() <= Rational::from(self.bound as i64)
    }

    /// Indices in increasing order.
    pub fn indices(&self) -> Vec<Rational> {
        let b = self.bound as i64;
        (-b..=b).map(|n| &self.step * Rational::from(n)).collect()
    }

    /// Every difference of two window indices, i.e. every generator index that
    /// can act inside the window.
    pub fn steps(&self) -> Vec<Rational> {
        let b = 2 * self.bound as i64;
        (-b..=b).map(|n| &self.step * Rational::from(n)).collect()
    }

    /// `d_p` and `I(p)` for every step `p`.
    pub fn generators(&self) -> Vec<BasisKey> {
        self.steps().into_iter().flat_map(|p| [BasisKey::D(p.clone()), BasisKey::I(p)]).collect()
    }

    fn check_inside(&self, params: &ModuleParams) -> Result<(), AnalysisError> {
        if !self.group.is_subgroup_of(params.group()) {
            return Err(AnalysisError::WindowOutsideModule {
                window: self.group.clone(),
                module: params.group().clone(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.group, self.bound)
    }
}

impl Serialize for Window {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Window", 2)?;
        s.serialize_field("group", &self.group.to_string())?;
        s.serialize_field("bound", &self.bound)?;
        s.end()
    }
}

/// `generator·v`, keeping only source and target indices inside the window.
pub fn act_truncated(
    params: &ModuleParams,
    generator: &BasisKey,
    v: &WeightVector,
    window: &Window,
) -> WeightVector {
    let mut out = WeightVector::zero();
    let Some(p) = generator.index() else {
        return out;
    };
    for (q, c) in v.entries() {
        let target = p + q;
        if window.contains(q) && window.contains(&target) {
            out.add_term(target, &(c * params.coeff(generator, q)));
        }
    }
    out
}

/// Span of weight vectors kept in reduced row-echelon form. Rows are sorted
/// by pivot, the pivot is each row's smallest index, and pivot entries are 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Subspace {
    rows: Vec<WeightVector>,
}

impl Subspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[WeightVector] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<Rational> {
        self.rows.iter().map(|r| r.leading().expect("rows are nonzero").0.clone()).collect()
    }

    /// Whether the subspace is spanned by basis vectors `v_q`.
    pub fn is_coordinate(&self) -> bool {
        self.rows.iter().all(|r| r.len() == 1)
    }

    pub fn reduce(&self, v: &WeightVector) -> WeightVector {
        let mut v = v.clone();
        for row in &self.rows {
            let pivot = row.leading().expect("rows are nonzero").0;
            let c = v.coeff(pivot);
            if !c.is_zero() {
                v.add_scaled(row, &-c);
            }
        }
        v
    }

    pub fn contains(&self, v: &WeightVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns the normalized new row when the
    /// dimension grew.
    pub fn insert(&mut self, v: &WeightVector) -> Option<WeightVector> {
        let r = self.reduce(v);
        let (pivot, lead) = r.leading()?;
        let pivot = pivot.clone();
        let r = r.scale(&lead.recip());
        for row in &mut self.rows {
            let c = row.coeff(&pivot);
            if !c.is_zero() {
                row.add_scaled(&r, &-c);
            }
        }
        let pos = self.rows.partition_point(|row| row.leading().expect("rows are nonzero").0 < &pivot);
        self.rows.insert(pos, r.clone());
        Some(r)
    }
}

/// Smallest window-truncated submodule containing `seeds`.
pub fn closure(
    params: &ModuleParams,
    window: &Window,
    seeds: &[WeightVector],
) -> Result<Subspace, AnalysisError> {
    window.check_inside(params)?;
    for seed in seeds {
        if let Some(q) = seed.indices().find(|q| !window.contains(q)) {
            return Err(AnalysisError::IndexOutsideWindow(q.clone()));
        }
    }
    let generators = window.generators();
    let mut span = Subspace::new();
    let mut queue: VecDeque<WeightVector> = seeds.iter().filter_map(|s| span.insert(s)).collect();
    while let Some(v) = queue.pop_front() {
        for g in &generators {
            let image = act_truncated(params, g, &v, window);
            if let Some(row) = span.insert(&image) {
                queue.push_back(row);
            }
        }
    }
    Ok(span)
}

/// Window verdict together with the closure dimension of every basis seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanResult {
    pub classification: Classification,
    pub dimensions: Vec<usize>,
}

/// Empirical reducibility test: closes every singleton seed `v_q` of the window.
pub fn reducibility_scan(params: &ModuleParams, window: &Window) -> Result<ScanResult, AnalysisError> {
    if window.bound() < 2 {
        return Err(AnalysisError::BoundTooSmall { min: 2, got: window.bound() });
    }
    let size = window.size();
    let mut dimensions = Vec::with_capacity(size);
    let mut trivial_sub = false;
    let mut codim_one = false;
    let mut odd = None;
    for q in window.indices() {
        let span = closure(params, window, &[WeightVector::basis(q.clone())])?;
        let dim = span.dim();
        dimensions.push(dim);
        if dim == size {
            continue;
        }
        if dim == 1 {
            trivial_sub = true;
        } else if dim + 1 == size && span.is_coordinate() {
            codim_one = true;
        } else if odd.is_none() {
            odd = Some((q, dim));
        }
    }
    let verdict = if trivial_sub {
        Verdict::ReducibleTrivialSub
    } else if codim_one {
        Verdict::ReducibleCodimOne
    } else if let Some((seed, dim)) = odd {
        return Err(AnalysisError::Inconclusive { seed, dim, size });
    } else {
        Verdict::Irreducible
    };
    Ok(ScanResult { classification: Classification::from_verdict(verdict), dimensions })
}

/// One coset `q + H` of the restriction to a subgroup `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetComponent {
    pub representative: Rational,
    pub params: ModuleParams,
    pub indices: Vec<Rational>,
}

/// Splits the window into cosets of `subgroup`; the coset through `q` is the
/// module `V(α+q, β; F)` over `subgroup`.
pub fn restriction_report(
    params: &ModuleParams,
    subgroup: &SubgroupSpec,
    window: &Window,
) -> Result<Vec<CosetComponent>, AnalysisError> {
    if !subgroup.is_subgroup_of(params.group()) {
        return Err(AnalysisError::NotSubgroup { sub: subgroup.clone(), group: params.group().clone() });
    }
    if window.group() != params.group() {
        return Err(AnalysisError::WindowOutsideModule {
            window: window.group().clone(),
            module: params.group().clone(),
        });
    }
    let mut cosets: Vec<Vec<Rational>> = Vec::new();
    for q in window.indices() {
        match cosets.iter_mut().find(|c| subgroup.contains(&(&q - &c[0]))) {
            Some(c) => c.push(q),
            None => cosets.push(vec![q]),
        }
    }
    let mut out = cosets
        .into_iter()
        .map(|indices| {
            let representative = indices
                .iter()
                .filter(|q| !q.is_negative())
                .min()
                .or_else(|| indices.iter().min_by_key(|q| q.abs()))
                .cloned()
                .expect("cosets are nonempty");
            let params = ModuleParams::new(
                params.alpha() + &representative,
                params.beta().clone(),
                params.big_f().clone(),
                subgroup.clone(),
            )?;
            Ok(CosetComponent { representative, params, indices })
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}

/// Checks that a linear map `v_q ↦ image(q)` intertwines every window
/// generator. Source indices in `killed` span a submodule that is quotiented
/// out before mapping.
pub fn check_intertwiner(
    source: &ModuleParams,
    target: &ModuleParams,
    window: &Window,
    image: impl Fn(&Rational) -> WeightVector,
    killed: impl Fn(&Rational) -> bool,
) -> Result<bool, AnalysisError> {
    window.check_inside(source)?;
    let map = |v: &WeightVector| {
        let mut out = WeightVector::zero();
        for (q, c) in v.entries() {
            if !killed(q) {
                out.add_scaled(&image(q), c);
            }
        }
        out
    };
    for q in window.indices() {
        if killed(&q) {
            continue;
        }
        let vq = WeightVector::basis(q.clone());
        let mapped = map(&vq);
        for g in window.generators() {
            let p = g.index().expect("generators are non-central");
            if !window.contains(&(p + &q)) {
                continue;
            }
            let lhs = map(&act_truncated(source, &g, &vq, window));
            let rhs = act(target, &AlgebraElement::basis(g.clone()), &mapped)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `v_q ↦ w_{q−shift}` intertwines `V(p1)` and `V(p2)` on the window.
pub fn intertwiner_check(
    p1: &ModuleParams,
    p2: &ModuleParams,
    shift: &Rational,
    window: &Window,
) -> Result<bool, AnalysisError> {
    if !p1.group().contains(shift) {
        return Err(AnalysisError::ShiftOutsideGroup(shift.clone()));
    }
    check_intertwiner(p1, p2, window, |q| WeightVector::basis(q - shift), |_| false)
}

/// Whether `v̄_h ↦ h·w_h` intertwines `V(0,0;0)/T` with the codimension-1
/// submodule of `V(0,1;0)` over the window's group.
pub fn subquotient_swap_check(window: &Window) -> Result<bool, AnalysisError> {
    let group = window.group().clone();
    let zero = Rational::zero;
    let trivial = ModuleParams::new(zero(), zero(), zero(), group.clone())?;
    let codim = ModuleParams::new(zero(), Rational::one(), zero(), group)?;
    check_intertwiner(&trivial, &codim, window, |h| WeightVector::term(h.clone(), h.clone()), |h| h.is_zero())
}

/// Verifies an [`IsoWitness`] returned for `(p1, p2)` on the window.
pub fn witness_check(
    p1: &ModuleParams,
    p2: &ModuleParams,
    witness: &IsoWitness,
    window: &Window,
) -> Result<bool, AnalysisError> {
    match witness {
        IsoWitness::Shift(g) => intertwiner_check(p1, p2, g, window),
        IsoWitness::SubquotientSwap => subquotient_swap_check(window),
        IsoWitness::DensitySwap(g) => {
            if !p1.group().contains(g) {
                return Err(AnalysisError::ShiftOutsideGroup(g.clone()));
            }
            let forward = p1.beta().is_zero();
            check_intertwiner(
                p1,
                p2,
                window,
                |q| {
                    let c = p1.alpha() + q;
                    WeightVector::term(q - g, if forward { c } else { c.recip() })
                },
                |_| false,
            )
        }
    }
}

/// A weight module with one-dimensional weight spaces, given by the matrix
/// entries of every window generator: `generator·v_source = coefficient·v_target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionTable {
    window: Window,
    entries: BTreeMap<(BasisKey, Rational), (Rational, Rational)>,
}

impl ActionTable {
    pub fn new(window: Window) -> Self {
        ActionTable { window, entries: BTreeMap::new() }
    }

    /// The table of `V(α,β;F)` in its standard basis.
    pub fn of_module(params: &ModuleParams, window: &Window) -> Result<Self, AnalysisError> {
        window.check_inside(params)?;
        let mut table = ActionTable::new(window.clone());
        for q in window.indices() {
            for g in window.generators() {
                let p = g.index().expect("generators are non-central");
                let target = p + &q;
                if window.contains(&target) {
                    let c = params.coeff(&g, &q);
                    table.entries.insert((g, q.clone()), (target, c));
                }
            }
        }
        Ok(table)
    }

    /// Action of `HVir[ℤ]` on `V(α,β;F)` over `ℚ_m` through the centerless
    /// rescaling map, with `v_{k/m!}` relabelled as index `k`.
    pub fn transported(params: &ModuleParams, m: u32, bound: u32) -> Result<Self, AnalysisError> {
        let phi = RescalingMap::new(m, PhiVariant::Centerless).expect("m is positive");
        let big_m = phi.scale();
        let window = Window::integers(bound)?;
        let mut table = ActionTable::new(window.clone());
        for k in window.indices() {
            let source = WeightVector::basis(&k / &big_m);
            for g in window.generators() {
                let i = g.index().expect("generators are non-central");
                let target = i + &k;
                if !window.contains(&target) {
                    continue;
                }
                let x = phi
                    .apply(&AlgebraElement::basis(g.clone()))
                    .expect("integer generators are in the domain");
                let image = act(params, &x, &source)?;
                let c = image.coeff(&(&target / &big_m));
                table.entries.insert((g, k.clone()), (target, c));
            }
        }
        Ok(table)
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&BasisKey, &Rational, &Rational, &Rational)> {
        self.entries.iter().map(|((g, s), (t, c))| (g, s, t, c))
    }

    pub fn get(&self, generator: &BasisKey, source: &Rational) -> Option<&(Rational, Rational)> {
        self.entries.get(&(generator.clone(), source.clone()))
    }

    /// Sets one entry; the target is `source + index(generator)`.
    pub fn set(
        &mut self,
        generator: BasisKey,
        source: Rational,
        coeff: Rational,
    ) -> Result<(), AnalysisError> {
        let p = generator
            .index()
            .ok_or_else(|| AnalysisError::NotIntermediateSeries("central generator in table".into()))?;
        let target = p + &source;
        for q in [&source, &target] {
            if !self.window.contains(q) {
                return Err(AnalysisError::IndexOutsideWindow(q.clone()));
            }
        }
        self.entries.insert((generator, source), (target, coeff));
        Ok(())
    }

    /// The same module written in the basis `v'_q = scales[q]·v_q`.
    pub fn rescaled(&self, scales: &BTreeMap<Rational, Rational>) -> Self {
        let scale = |q: &Rational| scales.get(q).cloned().unwrap_or_else(Rational::one);
        let entries = self
            .entries
            .iter()
            .map(|((g, s), (t, c))| ((g.clone(), s.clone()), (t.clone(), c * scale(s) / scale(t))))
            .collect();
        ActionTable { window: self.window.clone(), entries }
    }

    /// Text form: a `window <groupspec> <bound>` header, then one
    /// `<generator> <source> <target> <coefficient>` line per entry.
    pub fn to_text(&self) -> String {
        let mut out = format!("window {}\n", self.window);
        for ((g, s), (t, c)) in &self.entries {
            out.push_str(&format!("{g} {s} {t} {c}\n"));
        }
        out
    }
}

impl FromStr for ActionTable {
    type Err = AnalysisError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, message: String| AnalysisError::TableSyntax { line, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (n, header) = lines.next().ok_or_else(|| err(1, "missing window header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [tag, group, bound] = fields[..] else {
            return Err(err(n, "expected `window <groupspec> <bound>`".into()));
        };
        if tag != "window" {
            return Err(err(n, "expected `window <groupspec> <bound>`".into()));
        }
        let group: SubgroupSpec = group.parse().map_err(|e: GroupError| err(n, e.to_string()))?;
        let bound: u32 = bound.parse().map_err(|_| err(n, format!("bad bound `{bound}`")))?;
        let mut table = ActionTable::new(Window::new(group, bound)?);
        for (n, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [g, s, t, c] = fields[..] else {
                return Err(err(n, "expected `<generator> <source> <target> <coefficient>`".into()));
            };
            let generator = parse_generator(g).ok_or_else(|| err(n, format!("bad generator `{g}`")))?;
            let rat = |x: &str| x.parse::<Rational>().map_err(|e: RationalParseError| err(n, e.to_string()));
            let (source, target, coeff) = (rat(s)?, rat(t)?, rat(c)?);
            let p = generator.index().expect("parsed generators are non-central");
            if p + &source != target {
                return Err(err(n, format!("target {target} != {source} + {p}")));
            }
            table.set(generator, source, coeff).map_err(|e| err(n, e.to_string()))?;
        }
        Ok(table)
    }
}

fn parse_generator(s: &str) -> Option<BasisKey> {
    let inner = |prefix: &str| s.strip_prefix(prefix)?.strip_suffix(')')?.parse::<Rational>().ok();
    inner("d(").map(BasisKey::D).or_else(|| inner("I(").map(BasisKey::I))
}

/// Parameters read off an [`ActionTable`], with the basis scaling that puts
/// it into standard form: the table's basis is `v'_q = scales[q]·v_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovered {
    pub params: ModuleParams,
    pub scales: BTreeMap<Rational, Rational>,
}

/// Recovers `(α, β, F)` and the basis scaling from a table, then verifies
/// every entry against the intermediate-series formulas. A table of
/// `V(α,0;0)` with `α ∉ G` is also one of `V(α,1;0)`; that case reports `β = 1`.
pub fn recover_params(table: &ActionTable) -> Result<Recovered, AnalysisError> {
    let zero = Rational::zero();
    let eigen = |make: fn(Rational) -> BasisKey, offset: bool| -> Result<Rational, AnalysisError> {
        let mut value: Option<Rational> = None;
        for (g, s, _, c) in table.entries() {
            if *g != make(zero.clone()) {
                continue;
            }
            let v = if offset { c - s } else { c.clone() };
            match &value {
                None => value = Some(v),
                Some(prev) if *prev != v => {
                    return Err(AnalysisError::NotIntermediateSeries(format!(
                        "{g} eigenvalues disagree at index {s}"
                    )))
                }
                _ => {}
            }
        }
        value.ok_or_else(|| AnalysisError::Ambiguous(format!("no {} entries", make(zero.clone()))))
    };
    let alpha = eigen(BasisKey::D, true)?;
    let big_f = eigen(BasisKey::I, false)?;
    let group = table.window().group().clone();

    if !big_f.is_zero() {
        let scales = gauge(table, |g, _| match g {
            BasisKey::I(_) => Some(big_f.clone()),
            _ => None,
        })?
        .ok_or_else(|| AnalysisError::Ambiguous("I-entries do not connect the window".into()))?;
        let beta = table
            .entries()
            .find_map(|(g, s, t, c)| match g {
                BasisKey::D(p) if !p.is_zero() => {
                    let standard = c * &scales[t] / &scales[s];
                    Some((standard - &alpha - s) / p)
                }
                _ => None,
            })
            .ok_or_else(|| AnalysisError::Ambiguous("no d_p entries with p != 0".into()))?;
        let params = ModuleParams::new(alpha.clone(), beta, big_f, group)?;
        verify_table(table, &params, &alpha, &scales)?;
        return Ok(Recovered { params, scales });
    }

    // F = 0: d_p at q followed by d_{-p} at q+p is gauge invariant and
    // equals (a+pβ)(a+p−pβ) with a = α+q, which pins β up to β ↔ 1−β.
    let (p, s, product) = table
        .entries()
        .find_map(|(g, s, t, c)| match g {
            BasisKey::D(p) if !p.is_zero() => {
                let (_, back) = table.get(&BasisKey::D(-p), t)?;
                Some((p.clone(), s.clone(), c * back))
            }
            _ => None,
        })
        .ok_or_else(|| AnalysisError::Ambiguous("no d_p, d_-p entry pair".into()))?;
    let a = &alpha + &s;
    let t = (product - &a * &a - &a * &p) / (&p * &p);
    let disc = Rational::one() - Rational::from(4) * t;
    let root = disc
        .sqrt_exact()
        .ok_or_else(|| AnalysisError::NotIntermediateSeries("beta is not rational".into()))?;
    let two = Rational::from(2);
    let mut candidates = vec![(Rational::one() + &root) / &two];
    if !root.is_zero() {
        candidates.push((Rational::one() - &root) / &two);
    }

    let mut found: Vec<Recovered> = Vec::new();
    let mut disconnected = false;
    for beta in candidates {
        let params = ModuleParams::new(alpha.clone(), beta, Rational::zero(), group.clone())?;
        let scales = match gauge(table, |g, q| match g {
            BasisKey::D(_) => Some(params.coeff(g, q)),
            _ => None,
        }) {
            Ok(Some(scales)) => scales,
            Ok(None) => {
                disconnected = true;
                continue;
            }
            Err(_) => continue,
        };
        if verify_table(table, &params, &alpha, &scales).is_ok() {
            found.push(Recovered { params, scales });
        }
    }
    match found.len() {
        1 => Ok(found.pop().expect("one candidate")),
        0 if disconnected => Err(AnalysisError::Ambiguous("d-entries do not connect the window".into())),
        0 => Err(AnalysisError::NotIntermediateSeries("no beta fits every entry".into())),
        // Only {0, 1} with α ∉ G: V(α,0;0) ≅ V(α,1;0), so both fits
        // reproduce the table. Report β = 1.
        _ => Ok(found.swap_remove(0)),
    }
}

/// Solves `observed = (c_s / c_t)·standard` along edges with nonzero
/// standard coefficient, starting from `c_0 = 1`. `Ok(None)` when some index
/// is unreachable.
fn gauge(
    table: &ActionTable,
    standard: impl Fn(&BasisKey, &Rational) -> Option<Rational>,
) -> Result<Option<BTreeMap<Rational, Rational>>, AnalysisError> {
    let mut edges: BTreeMap<Rational, Vec<(Rational, Rational)>> = BTreeMap::new();
    for (g, s, t, c) in table.entries() {
        let Some(expected) = standard(g, s) else { continue };
        if expected.is_zero() || s == t {
            continue;
        }
        if c.is_zero() {
            return Err(AnalysisError::NotIntermediateSeries(format!("{g} v({s}) vanishes but should not")));
        }
        // c_t = c_s · expected / observed
        let ratio = expected / c;
        edges.entry(s.clone()).or_default().push((t.clone(), ratio.clone()));
        edges.entry(t.clone()).or_default().push((s.clone(), ratio.recip()));
    }
    let mut scales = BTreeMap::new();
    let base = Rational::zero();
    scales.insert(base.clone(), Rational::one());
    let mut queue = VecDeque::from([base]);
    while let Some(s) = queue.pop_front() {
        let cs = scales[&s].clone();
        for (t, ratio) in edges.get(&s).into_iter().flatten() {
            let ct = &cs * ratio;
            match scales.get(t) {
                Some(prev) if *prev != ct => {
                    return Err(AnalysisError::NotIntermediateSeries(format!(
                        "inconsistent basis scaling at index {t}"
                    )))
                }
                Some(_) => {}
                None => {
                    scales.insert(t.clone(), ct);
                    queue.push_back(t.clone());
                }
            }
        }
    }
    let complete = table.window().indices().iter().all(|q| scales.contains_key(q));
    Ok(complete.then_some(scales))
}

fn verify_table(
    table: &ActionTable,
    params: &ModuleParams,
    alpha: &Rational,
    scales: &BTreeMap<Rational, Rational>,
) -> Result<(), AnalysisError> {
    // `params.alpha()` is normalized; the table's eigenvalues use the raw α.
    let raw = ModuleParamsView { alpha, params };
    for (g, s, t, c) in table.entries() {
        let expected = raw.coeff(g, s) * &scales[s] / &scales[t];
        if *c != expected {
            return Err(AnalysisError::NotIntermediateSeries(format!(
                "{g} v({s}) = {c} v({t}), expected {expected}"
            )));
        }
    }
    Ok(())
}

struct ModuleParamsView<'a> {
    alpha: &'a Rational,
    params: &'a ModuleParams,
}

impl ModuleParamsView<'_> {
    fn coeff(&self, g: &BasisKey, q: &Rational) -> Rational {
        match g {
            BasisKey::D(p) => self.alpha + q + p * self.params.beta(),
            BasisKey::I(_) => self.params.big_f().clone(),
            _ => Rational::zero(),
        }
    }
}

/// A basis of weight vectors on a window together with the action table it
/// produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateBasis {
    pub table: ActionTable,
    pub vectors: BTreeMap<Rational, WeightVector>,
}

/// Rescales a candidate basis so that it extends `reference`: on the shared
/// indices `candidate_q = c·reference_q` must hold for a single constant `c`,
/// and the whole candidate basis is divided by it.
pub fn align_extension(
    reference: &BTreeMap<Rational, WeightVector>,
    candidate: &CandidateBasis,
) -> Result<BTreeMap<Rational, WeightVector>, AnalysisError> {
    let recovered = recover_params(&candidate.table)?;
    if recovered.params.big_f().is_zero() {
        return Err(AnalysisError::ZeroHeisenbergCharge);
    }
    let overlap: BTreeSet<&Rational> =
        reference.keys().filter(|q| candidate.vectors.contains_key(*q)).collect();
    if overlap.len() < 2 {
        return Err(AnalysisError::DisjointOverlap);
    }
    let mut ratios: BTreeMap<Rational, Rational> = BTreeMap::new();
    for &q in &overlap {
        let (r, cand) = (&reference[q], &candidate.vectors[q]);
        let Some((lead, rc)) = r.leading() else {
            return Err(AnalysisError::NotProportional(q.clone()));
        };
        let c = cand.coeff(lead) / rc;
        if c.is_zero() || *cand != r.scale(&c) {
            return Err(AnalysisError::NotProportional(q.clone()));
        }
        ratios.insert(q.clone(), c);
    }
    // I(p)v'_q = F v'_{p+q} and I(p)v_q = F v_{p+q} force c_q = c_{p+q}.
    for (g, s, t, _) in candidate.table.entries() {
        if let (BasisKey::I(_), Some(cs), Some(ct)) = (g, ratios.get(s), ratios.get(t)) {
            if cs != ct {
                return Err(AnalysisError::NonConstantScaling(s.clone(), t.clone()));
            }
        }
    }
    let mut iter = ratios.iter();
    let (first_q, c) = iter.next().expect("overlap is nonempty");
    if let Some((q, _)) = iter.find(|(_, other)| *other != c) {
        return Err(AnalysisError::NonConstantScaling(first_q.clone(), q.clone()));
    }
    let inv = c.recip();
    Ok(candidate.vectors.iter().map(|(q, v)| (q.clone(), v.scale(&inv))).collect())
}

/// Structured report consumed by the CLI. Keys serialize in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ModuleParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimensions: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_indices: Option<Vec<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cosets: Option<Vec<CosetComponent>>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
