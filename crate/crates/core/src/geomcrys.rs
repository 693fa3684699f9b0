//! Geometric pre-crystals and crystals carried by explicit torus charts:
//! axiom checks, composite actions along reduced words, Verma-relation
//! verification, the rational Weyl-group action, duality, and the
//! trivialization of crystals for SL_{r+1}.
//!
//! Every crystal here is a tuple of rational maps on an affine chart. A
//! "program" is a word of e_i applications whose exponents are rational
//! functions of the original point; it can be run symbolically (exact) or
//! on exact rational points (sampled).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::Error;
use crate::matgroup::GroupCtx;
use crate::ratfunc::{identity_tuple, Rat, RatFunc};
use crate::sample::Sampler;
use crate::weyl::WeylElt;
use crate::Result;

/// Verification mode: exact symbolic equality or seeded pointwise equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sampled { seed: u64, points: usize },
}

impl Mode {
    pub fn sampled(seed: u64) -> Mode {
        Mode::Sampled { seed, points: 20 }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Sampled { .. } => "sampled",
        }
    }
}

type PointFn = Arc<dyn Fn(usize, &Rat, &[Rat]) -> Result<Vec<Rat>> + Send + Sync>;

/// A geometric crystal on an m-dimensional chart.
///
/// `e_maps[i]` has arity 1 + m with variable 0 the action parameter c;
/// `gamma` is the torus-valued map in torus coordinates; `phi` holds the
/// decoration functions when present. An optional pointwise evaluator
/// (installed by the unipotent-crystal layer) computes e_i at rational
/// points without expanding the symbolic maps.
#[derive(Clone)]
pub struct GeomCrystal {
    pub ctx: Arc<GroupCtx>,
    pub m: usize,
    pub support: Vec<usize>,
    e_maps: BTreeMap<usize, Vec<RatFunc>>,
    pub gamma: Vec<RatFunc>,
    pub phi: BTreeMap<usize, RatFunc>,
    point_fn: Option<PointFn>,
}

impl std::fmt::Debug for GeomCrystal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GeomCrystal")
            .field("m", &self.m)
            .field("support", &self.support)
            .finish()
    }
}

impl GeomCrystal {
    pub fn new(
        ctx: Arc<GroupCtx>,
        m: usize,
        support: Vec<usize>,
        e_maps: BTreeMap<usize, Vec<RatFunc>>,
        gamma: Vec<RatFunc>,
        phi: BTreeMap<usize, RatFunc>,
    ) -> Result<GeomCrystal> {
        for comps in e_maps.values() {
            if comps.len() != m || comps.iter().any(|f| f.arity() != m + 1) {
                return Err(Error::Arity {
                    expected: m + 1,
                    got: comps.first().map(|f| f.arity()).unwrap_or(0),
                });
            }
        }
        if gamma.len() != ctx.rank() || gamma.iter().any(|f| f.arity() != m) {
            return Err(Error::Invalid(
                "gamma must be a torus-coordinate tuple over the chart".into(),
            ));
        }
        Ok(GeomCrystal {
            ctx,
            m,
            support,
            e_maps,
            gamma,
            phi,
            point_fn: None,
        })
    }

    pub fn with_point_fn(mut self, f: PointFn) -> Self {
        self.point_fn = Some(f);
        self
    }

    pub fn e_map(&self, i: usize) -> Result<&[RatFunc]> {
        self.e_maps
            .get(&i)
            .map(|v| v.as_slice())
            .ok_or(Error::UnsupportedIndex(i))
    }

    /// Replace one e-map; used as a negative control by the suites.
    pub fn override_e_map(&self, i: usize, comps: Vec<RatFunc>) -> GeomCrystal {
        let mut out = self.clone();
        out.e_maps.insert(i, comps);
        out.point_fn = None;
        out
    }

    pub fn e_at(&self, i: usize, c: &Rat, z: &[Rat]) -> Result<Vec<Rat>> {
        if let Some(f) = &self.point_fn {
            return f(i, c, z);
        }
        let comps = self.e_map(i)?;
        let mut point = Vec::with_capacity(self.m + 1);
        point.push(c.clone());
        point.extend_from_slice(z);
        comps.iter().map(|f| f.eval(&point)).collect()
    }

    pub fn gamma_at(&self, z: &[Rat]) -> Result<Vec<Rat>> {
        self.gamma.iter().map(|f| f.eval(z)).collect()
    }

    pub fn phi_at(&self, i: usize, z: &[Rat]) -> Result<Rat> {
        self.phi.get(&i).ok_or(Error::UnsupportedIndex(i))?.eval(z)
    }

    /// The dual crystal: gamma inverted, the action run backwards, and the
    /// decoration transformed as for the dual of an induced crystal.
    pub fn dualize(&self) -> Result<GeomCrystal> {
        let mut e_maps = BTreeMap::new();
        for (&i, comps) in &self.e_maps {
            let arity = self.m + 1;
            let mut images = identity_tuple(arity);
            images[0] = images[0].inv()?;
            let dual_comps = comps
                .iter()
                .map(|f| f.substitute(&images))
                .collect::<Result<Vec<_>>>()?;
            e_maps.insert(i, dual_comps);
        }
        let gamma = self
            .gamma
            .iter()
            .map(|f| f.inv())
            .collect::<Result<Vec<_>>>()?;
        let mut phi = BTreeMap::new();
        for (&i, p) in &self.phi {
            let alpha = self.ctx.alpha_char(i, &self.gamma)?;
            phi.insert(i, p.neg().mul(&alpha));
        }
        let mut out = GeomCrystal {
            ctx: self.ctx.clone(),
            m: self.m,
            support: self.support.clone(),
            e_maps,
            gamma,
            phi,
            point_fn: None,
        };
        if let Some(f) = &self.point_fn {
            let inner = f.clone();
            out.point_fn = Some(Arc::new(move |i, c, z| {
                use num_traits::One;
                let inv = Rat::one() / c;
                inner(i, &inv, z)
            }));
        }
        Ok(out)
    }
}

/// A word of e_i applications. Step exponents are rational functions of the
/// ORIGINAL chart point (extended by free parameters); steps are listed in
/// composition order, so the last step acts first.
#[derive(Debug, Clone)]
pub struct EiProgram {
    /// Arity of the exponent functions: chart variables first, then free
    /// parameters.
    pub ambient: usize,
    pub steps: Vec<(usize, RatFunc)>,
}

impl EiProgram {
    pub fn new(ambient: usize, steps: Vec<(usize, RatFunc)>) -> Self {
        assert!(steps.iter().all(|(_, c)| c.arity() == ambient));
        EiProgram { ambient, steps }
    }
}

impl GeomCrystal {
    /// Run a program symbolically; the result is the tuple of chart maps
    /// over the program's ambient variables.
    pub fn run_symbolic(&self, prog: &EiProgram) -> Result<Vec<RatFunc>> {
        let amb = prog.ambient;
        assert!(amb >= self.m);
        let mut current: Vec<RatFunc> = (0..self.m).map(|k| RatFunc::var(amb, k)).collect();
        for (i, carg) in prog.steps.iter().rev() {
            let comps = self.e_map(*i)?;
            let mut images = Vec::with_capacity(self.m + 1);
            images.push(carg.clone());
            images.extend(current.iter().cloned());
            current = comps
                .iter()
                .map(|f| f.substitute(&images))
                .collect::<Result<Vec<_>>>()?;
        }
        Ok(current)
    }

    /// Run a program on an exact point (chart values then parameter values).
    pub fn run_point(&self, prog: &EiProgram, point: &[Rat]) -> Result<Vec<Rat>> {
        assert_eq!(point.len(), prog.ambient);
        let mut current: Vec<Rat> = point[..self.m].to_vec();
        for (i, carg) in prog.steps.iter().rev() {
            let c = carg.eval(point)?;
            if c.is_zero() {
                return Err(Error::PoleAtPoint);
            }
            current = self.e_at(*i, &c, &current)?;
        }
        Ok(current)
    }

    /// Compare two programs in the requested mode. Sampled points are
    /// positive rationals; draws hitting poles are redrawn.
    pub fn programs_agree(
        &self,
        a: &EiProgram,
        b: &EiProgram,
        mode: Mode,
        tag: &str,
    ) -> Result<bool> {
        assert_eq!(a.ambient, b.ambient);
        match mode {
            Mode::Exact => {
                let ta = self.run_symbolic(a)?;
                let tb = self.run_symbolic(b)?;
                Ok(ta.iter().zip(&tb).all(|(x, y)| x.equals(y)))
            }
            Mode::Sampled { seed, points } => {
                let mut sampler = Sampler::for_check(seed, tag);
                let mut done = 0;
                let mut tries = 0;
                while done < points {
                    tries += 1;
                    if tries > 100 * points {
                        return Err(Error::Invalid(format!(
                            "could not sample {points} pole-free points for {tag}"
                        )));
                    }
                    let point = sampler.point_pos(a.ambient);
                    match (self.run_point(a, &point), self.run_point(b, &point)) {
                        (Ok(x), Ok(y)) => {
                            if x != y {
                                return Ok(false);
                            }
                            done += 1;
                        }
                        (Err(Error::PoleAtPoint), _)
                        | (_, Err(Error::PoleAtPoint))
                        | (Err(Error::DivisionByZeroFunction), _)
                        | (_, Err(Error::DivisionByZeroFunction))
                        | (Err(Error::NotInBigCell), _)
                        | (_, Err(Error::NotInBigCell)) => continue,
                        (Err(e), _) | (_, Err(e)) => return Err(e),
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Pre-crystal axioms, verified symbolically per supported index.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub entries: Vec<(String, bool)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|(_, ok)| *ok)
    }
}

pub fn check_pre_crystal(x: &GeomCrystal) -> Result<AxiomReport> {
    let mut entries = Vec::new();
    let m = x.m;
    for &i in &x.support {
        let comps = x.e_map(i)?;
        // Unitality: e_i at c = 1 is the identity.
        let mut images = identity_tuple(m);
        images.insert(0, RatFunc::one(m));
        let at_one = comps
            .iter()
            .map(|f| f.substitute(&images))
            .collect::<Result<Vec<_>>>()?;
        let unital = at_one
            .iter()
            .enumerate()
            .all(|(k, f)| f.equals(&RatFunc::var(m, k)));
        entries.push((format!("unital e_{}", label(x, i)), unital));

        // Action law: e_i^c (e_i^c') = e_i^{c c'} over (z, c, c').
        let amb = m + 2;
        let c = RatFunc::var(amb, m);
        let cp = RatFunc::var(amb, m + 1);
        let lhs = x.run_symbolic(&EiProgram::new(amb, vec![(i, c.clone()), (i, cp.clone())]))?;
        let rhs = x.run_symbolic(&EiProgram::new(amb, vec![(i, c.mul(&cp))]))?;
        let law = lhs.iter().zip(&rhs).all(|(a, b)| a.equals(b));
        entries.push((format!("action law e_{}", label(x, i)), law));

        // gamma(e_i^c(z)) = alpha_i^vee(c) gamma(z), coordinatewise.
        let amb = m + 1;
        let c = RatFunc::var(amb, m);
        let image = x.run_symbolic(&EiProgram::new(amb, vec![(i, c.clone())]))?;
        let coroot = x.ctx.datum.simple_coroots[i].clone();
        let mut gamma_ok = true;
        for (k, g) in x.gamma.iter().enumerate() {
            let lhs = g.substitute(&image)?;
            let emb = g.remap(amb, &(0..m).collect::<Vec<_>>());
            let rhs = emb.mul(&c.pow(coroot[k])?);
            if !lhs.equals(&rhs) {
                gamma_ok = false;
            }
        }
        entries.push((format!("gamma compatibility e_{}", label(x, i)), gamma_ok));

        // phi_i(e_i^c(z)) = c^-1 phi_i(z) when phi is present.
        if let Some(p) = x.phi.get(&i) {
            let lhs = p.substitute(&image)?;
            let emb = p.remap(amb, &(0..m).collect::<Vec<_>>());
            let rhs = emb.div(&c)?;
            entries.push((format!("phi scaling e_{}", label(x, i)), lhs.equals(&rhs)));
        }
    }
    Ok(AxiomReport { entries })
}

fn label(x: &GeomCrystal, i: usize) -> String {
    x.ctx.datum.index_label(i).to_string()
}

/// The positive roots associated with a reduced word: the k-th is
/// s_{i_l} ... s_{i_{k+1}} applied to alpha_{i_k}.
pub fn associated_roots(x: &GeomCrystal, word: &[usize]) -> Vec<Vec<i64>> {
    let datum = &x.ctx.datum;
    let l = word.len();
    (0..l)
        .map(|k| {
            let mut suffix: Vec<usize> = word[k + 1..].to_vec();
            suffix.reverse();
            let u = datum.element(&suffix);
            u.apply_char(&datum.simple_roots[word[k]])
        })
        .collect()
}

/// e along a reduced sequence as a program over (chart, torus coords): the
/// exponent of the k-th letter is the associated root evaluated at t.
pub fn compose_ei(x: &GeomCrystal, word: &[usize]) -> Result<(Vec<Vec<i64>>, EiProgram)> {
    let datum = &x.ctx.datum;
    if datum.element(word).len() != word.len() {
        return Err(Error::NotReduced);
    }
    for &i in word {
        if !x.support.contains(&i) {
            return Err(Error::UnsupportedIndex(i));
        }
    }
    let roots = associated_roots(x, word);
    let amb = x.m + x.ctx.rank();
    let steps = word
        .iter()
        .zip(&roots)
        .map(|(&i, exps)| {
            // t-coordinates live after the chart variables.
            let mut mono = RatFunc::one(amb);
            for (j, &e) in exps.iter().enumerate() {
                mono = mono.mul(&RatFunc::var(amb, x.m + j).pow(e)?);
            }
            Ok((i, mono))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((roots, EiProgram::new(amb, steps)))
}

/// The rational Weyl action w(z) = e_w at t = gamma(z)^-1, as a program
/// over the chart alone.
pub fn weyl_act_program(x: &GeomCrystal, w: &WeylElt) -> Result<EiProgram> {
    for &i in w.word() {
        if !x.support.contains(&i) {
            return Err(Error::NotSupported);
        }
    }
    let roots = associated_roots(x, w.word());
    let steps = w
        .word()
        .iter()
        .zip(&roots)
        .map(|(&i, exps)| {
            let mono = x.ctx.char_monomial(exps, &x.gamma)?;
            Ok((i, mono.inv()?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EiProgram::new(x.m, steps))
}

pub fn weyl_act(x: &GeomCrystal, w: &WeylElt) -> Result<Vec<RatFunc>> {
    let prog = weyl_act_program(x, w)?;
    x.run_symbolic(&prog)
}

/// Verma relation patterns, keyed by the Cartan pairing of the ordered
/// pair (i, j).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VermaPattern {
    A1A1,
    A2,
    B2,
}

/// Both sides of the Verma relation for the pattern, as programs over
/// (chart, c1, c2).
pub fn verma_programs(
    x: &GeomCrystal,
    pattern: VermaPattern,
    i: usize,
    j: usize,
) -> Result<(EiProgram, EiProgram)> {
    let a_ij = x.ctx.datum.cartan(i, j);
    let a_ji = x.ctx.datum.cartan(j, i);
    let ok = match pattern {
        VermaPattern::A1A1 => a_ij == 0 && a_ji == 0,
        VermaPattern::A2 => a_ij == -1 && a_ji == -1,
        VermaPattern::B2 => a_ij == -2 && a_ji == -1,
    };
    if !ok {
        return Err(Error::PatternMismatch);
    }
    let amb = x.m + 2;
    let c1 = RatFunc::var(amb, x.m);
    let c2 = RatFunc::var(amb, x.m + 1);
    let (lhs, rhs) = match pattern {
        VermaPattern::A1A1 => (
            vec![(i, c1.clone()), (j, c2.clone())],
            vec![(j, c2), (i, c1)],
        ),
        VermaPattern::A2 => (
            vec![(i, c1.clone()), (j, c1.mul(&c2)), (i, c2.clone())],
            vec![(j, c2.clone()), (i, c1.mul(&c2)), (j, c1)],
        ),
        VermaPattern::B2 => {
            let c1sq_c2 = c1.mul(&c1).mul(&c2);
            (
                vec![
                    (i, c1.clone()),
                    (j, c1sq_c2.clone()),
                    (i, c1.mul(&c2)),
                    (j, c2.clone()),
                ],
                vec![(j, c2.clone()), (i, c1.mul(&c2)), (j, c1sq_c2), (i, c1)],
            )
        }
    };
    Ok((EiProgram::new(amb, lhs), EiProgram::new(amb, rhs)))
}

pub fn verify_verma(
    x: &GeomCrystal,
    pattern: VermaPattern,
    i: usize,
    j: usize,
    mode: Mode,
) -> Result<bool> {
    let (lhs, rhs) = verma_programs(x, pattern, i, j)?;
    x.programs_agree(&lhs, &rhs, mode, &format!("verma-{i}-{j}"))
}

/// (e_1^c .. e_j^c)(e_1^c' .. e_{j-1}^c') e_j^{c'/c}
///   = (e_1^c' .. e_j^c')(e_1^c .. e_{j-1}^c), indices 1-based.
pub fn chain_relation_programs(x: &GeomCrystal, j: usize) -> Result<(EiProgram, EiProgram)> {
    if j == 0 || j > x.ctx.index_count() {
        return Err(Error::Invalid("chain index out of range".into()));
    }
    let amb = x.m + 2;
    let c = RatFunc::var(amb, x.m);
    let cp = RatFunc::var(amb, x.m + 1);
    let run = |upto: usize, e: &RatFunc| -> Vec<(usize, RatFunc)> {
        (0..upto).map(|k| (k, e.clone())).collect()
    };
    let mut lhs = run(j, &c);
    lhs.extend(run(j - 1, &cp));
    lhs.push((j - 1, cp.div(&c)?));
    let mut rhs = run(j, &cp);
    rhs.extend(run(j - 1, &c));
    Ok((EiProgram::new(amb, lhs), EiProgram::new(amb, rhs)))
}

pub fn check_chain_relation(x: &GeomCrystal, j: usize, mode: Mode) -> Result<bool> {
    let (lhs, rhs) = chain_relation_programs(x, j)?;
    x.programs_agree(&lhs, &rhs, mode, &format!("chain-{j}"))
}

/// Fundamental weight coordinates omega_1..omega_r of gamma (type A).
pub fn omegas(x: &GeomCrystal) -> Vec<RatFunc> {
    (1..=x.ctx.index_count())
        .map(|k| x.ctx.fund_weight(k, &x.gamma))
        .collect()
}

/// The nested trivialization word for an SL_{r+1} crystal. `flipped` gives
/// the second trivialization obtained from the diagram automorphism.
pub fn trivialization_program(x: &GeomCrystal, flipped: bool) -> Result<EiProgram> {
    let r = x.ctx.index_count();
    let om = omegas(x);
    for w in &om {
        if w.is_zero() {
            return Err(Error::DegenerateGamma);
        }
    }
    // 1-based omega with the convention omega_{r+1} = 1.
    let omega = |k: usize| -> RatFunc {
        if k > r {
            RatFunc::one(x.m)
        } else if flipped {
            om[r - k].clone()
        } else {
            om[k - 1].clone()
        }
    };
    let idx = |i: usize| -> usize { if flipped { r - i } else { i - 1 } };
    let mut steps = Vec::new();
    for k in (1..=r).rev() {
        let c = omega(k + 1).div(&omega(k))?;
        for i in 1..=k {
            steps.push((idx(i), c.clone()));
        }
    }
    Ok(EiProgram::new(x.m, steps))
}

/// The symbolic trivialization map.
pub fn trivialize(x: &GeomCrystal, flipped: bool) -> Result<Vec<RatFunc>> {
    let prog = trivialization_program(x, flipped)?;
    x.run_symbolic(&prog)
}

/// The map e_1^{1/omega_1} e_2^{1/omega_2}, which kills gamma but is NOT
/// Weyl-invariant; kept as a negative control.
pub fn warning_program(x: &GeomCrystal) -> Result<EiProgram> {
    let om = omegas(x);
    let steps = vec![(0, om[0].inv()?), (1, om[1].inv()?)];
    Ok(EiProgram::new(x.m, steps))
}

/// Compose `outer` (a tuple over the chart) with the chart self-map `inner`.
pub fn compose_tuples(outer: &[RatFunc], inner: &[RatFunc]) -> Result<Vec<RatFunc>> {
    outer.iter().map(|f| f.substitute(inner)).collect()
}

pub fn tuples_equal(a: &[RatFunc], b: &[RatFunc]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.equals(y))
}

/// JSON document: chart variables, per-index component expressions, gamma,
/// phi.
pub fn to_json(x: &GeomCrystal) -> Result<serde_json::Value> {
    let chart_names: Vec<String> = (0..x.m).map(|k| format!("z{}", k + 1)).collect();
    let mut e_names = vec!["c".to_string()];
    e_names.extend(chart_names.iter().cloned());
    let mut e_obj = serde_json::Map::new();
    for &i in &x.support {
        let comps = x.e_map(i)?;
        e_obj.insert(
            x.ctx.datum.index_label(i).to_string(),
            serde_json::Value::Array(
                comps
                    .iter()
                    .map(|f| serde_json::Value::String(f.to_text(&e_names)))
                    .collect(),
            ),
        );
    }
    let mut phi_obj = serde_json::Map::new();
    for (&i, p) in &x.phi {
        phi_obj.insert(
            x.ctx.datum.index_label(i).to_string(),
            serde_json::Value::String(p.to_text(&chart_names)),
        );
    }
    Ok(serde_json::json!({
        "chart": chart_names,
        "e": serde_json::Value::Object(e_obj),
        "gamma": x.gamma.iter().map(|f| f.to_text(&chart_names)).collect::<Vec<_>>(),
        "phi": serde_json::Value::Object(phi_obj),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::GroupCtx;

    /// The rank-one cell crystal: chart z, e_1(c, z) = c z, gamma the
    /// coroot line, phi = 1/z.
    fn sl2_cell() -> GeomCrystal {
        let ctx = GroupCtx::sl(2);
        let c = RatFunc::var(2, 0);
        let z = RatFunc::var(2, 1);
        let mut e = BTreeMap::new();
        e.insert(0, vec![c.mul(&z)]);
        let gamma = vec![RatFunc::var(1, 0), RatFunc::var(1, 0).inv().unwrap()];
        let mut phi = BTreeMap::new();
        phi.insert(0, RatFunc::var(1, 0).inv().unwrap());
        GeomCrystal::new(ctx, 1, vec![0], e, gamma, phi).unwrap()
    }

    #[test]
    fn sl2_cell_passes_axioms() {
        let x = sl2_cell();
        let report = check_pre_crystal(&x).unwrap();
        assert!(report.passed(), "{:?}", report.entries);
    }

    #[test]
    fn corrupted_cell_fails_unitality() {
        let x = sl2_cell();
        let c = RatFunc::var(2, 0);
        let z = RatFunc::var(2, 1);
        let bad = x.override_e_map(0, vec![c.mul(&z).add(&RatFunc::one(2))]);
        let report = check_pre_crystal(&bad).unwrap();
        assert!(!report.passed());
        assert!(report
            .entries
            .iter()
            .any(|(name, ok)| name.starts_with("unital") && !ok));
    }

    #[test]
    fn weyl_act_on_sl2_cell_inverts() {
        let x = sl2_cell();
        let s1 = x.ctx.datum.simple(0);
        let img = weyl_act(&x, &s1).unwrap();
        assert!(img[0].equals(&RatFunc::var(1, 0).inv().unwrap()));
        // involution
        let prog = weyl_act_program(&x, &s1).unwrap();
        let once = x.run_symbolic(&prog).unwrap();
        let twice = compose_tuples(&once, &once).unwrap();
        assert!(twice[0].equals(&RatFunc::var(1, 0)));
    }

    #[test]
    fn associated_roots_example() {
        // For the word (1, 2) in SL3 the first associated root is
        // s_2(alpha_1) = alpha_1 + alpha_2 and the second is alpha_2.
        let ctx = GroupCtx::sl(3);
        let x = GeomCrystal::new(
            ctx,
            1,
            vec![0, 1],
            BTreeMap::new(),
            vec![RatFunc::one(1), RatFunc::one(1), RatFunc::one(1)],
            BTreeMap::new(),
        )
        .unwrap();
        let roots = associated_roots(&x, &[0, 1]);
        assert_eq!(roots[0], vec![1, 0, -1]);
        assert_eq!(roots[1], vec![0, 1, -1]);
    }

    #[test]
    fn compose_ei_single_letter_on_sl2() {
        let x = sl2_cell();
        let (roots, prog) = compose_ei(&x, &[0]).unwrap();
        assert_eq!(roots, vec![vec![1, -1]]);
        // At t = alpha_1^vee(c) the exponent is c^2.
        let tuple = x.run_symbolic(&prog).unwrap();
        // ambient: (z, t1, t2); substitute t = (c, 1/c).
        let c = RatFunc::var(2, 1);
        let z = RatFunc::var(2, 0);
        let at_t = tuple[0]
            .substitute(&[z.clone(), c.clone(), c.inv().unwrap()])
            .unwrap();
        assert!(at_t.equals(&c.mul(&c).mul(&z)));
    }

    #[test]
    fn dual_crystal_passes_axioms_and_is_involutive() {
        let x = sl2_cell();
        let dual = x.dualize().unwrap();
        assert!(check_pre_crystal(&dual).unwrap().passed());
        // e*_1(c, z) = z / c
        let comps = dual.e_map(0).unwrap();
        let c = RatFunc::var(2, 0);
        let z = RatFunc::var(2, 1);
        assert!(comps[0].equals(&z.div(&c).unwrap()));
        let double = dual.dualize().unwrap();
        assert!(double.e_map(0).unwrap()[0].equals(&x.e_map(0).unwrap()[0]));
        assert!(double.gamma[0].equals(&x.gamma[0]));
        assert!(double.phi[&0].equals(&x.phi[&0]));
    }

    #[test]
    fn chain_relation_j1_is_action_law() {
        let x = sl2_cell();
        assert!(check_chain_relation(&x, 1, Mode::Exact).unwrap());
    }

    #[test]
    fn sl2_trivialization() {
        let x = sl2_cell();
        let tau = trivialize(&x, false).unwrap();
        // tau(z) = e_1^{1/omega_1}(z) = z / z = 1... as a map the gamma of
        // the image must be the unit.
        for (k, g) in x.gamma.iter().enumerate() {
            let img = g.substitute(&tau).unwrap();
            assert!(img.is_one(), "gamma coord {k} not killed");
        }
        // W-invariance: tau(s_1(z)) = tau(z).
        let s1 = weyl_act(&x, &x.ctx.datum.simple(0)).unwrap();
        let tau_s = compose_tuples(&tau, &s1).unwrap();
        assert!(tuples_equal(&tau_s, &tau));
    }
}
