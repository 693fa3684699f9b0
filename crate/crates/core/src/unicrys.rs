//! Unipotent crystals: cells in B^- presented as products of one-dimensional
//! crystals (plus the full lower-triangular chart), the product construction,
//! the induced geometric crystal with its tensor-product action formula, the
//! generator-level U-action, duality, Levi restriction, diagonalization, the
//! unipotent Weyl action u_w, and the invariant functions chi^w and f^w.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::geomcrys::GeomCrystal;
use crate::matgroup::{self, gauss, GroupCtx, Matrix};
use crate::ratfunc::{Rat, RatFunc};
use crate::weyl::{GroupKind, WeylElt};
use crate::Result;

/// One factor of a chart of (an open piece of) B^-.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    /// The one-dimensional cell (G_m, pi_i): f(z) = y_i(1/z) alpha_i^vee(z).
    OneDim { index: usize },
    /// The full lower-triangular chart: n diagonal entries then the
    /// below-diagonal entries in row-major order. Type A contexts only.
    BMinus,
}

/// A unipotent crystal presented by a factored chart map into B^-.
///
/// `levi_mask` restricts to a Levi subgroup: the chart and the underlying
/// U-action are unchanged, but f is post-composed with the block projection,
/// which kills phi outside the mask. `dualized` replaces f by its inverse
/// and conjugates the action accordingly.
#[derive(Debug, Clone)]
pub struct UniCrystal {
    pub ctx: Arc<GroupCtx>,
    pub factors: Vec<Factor>,
    pub levi_mask: Option<Vec<usize>>,
    pub dualized: bool,
}

#[derive(Debug, Clone, Copy)]
struct Slot<'a> {
    factor: &'a Factor,
    offset: usize,
    arity: usize,
}

impl UniCrystal {
    pub fn standard_cell(ctx: &Arc<GroupCtx>, word: &[usize]) -> Result<UniCrystal> {
        if ctx.datum.element(word).len() != word.len() {
            return Err(Error::NotReduced);
        }
        Ok(UniCrystal {
            ctx: ctx.clone(),
            factors: word.iter().map(|&i| Factor::OneDim { index: i }).collect(),
            levi_mask: None,
            dualized: false,
        })
    }

    /// The unipotent crystal (B^-, id) on the full lower-triangular chart.
    pub fn b_minus_cell(ctx: &Arc<GroupCtx>) -> Result<UniCrystal> {
        match ctx.kind() {
            GroupKind::Gl(_) | GroupKind::Sl(_) => Ok(UniCrystal {
                ctx: ctx.clone(),
                factors: vec![Factor::BMinus],
                levi_mask: None,
                dualized: false,
            }),
            _ => Err(Error::Invalid("the full chart needs a type A context".into())),
        }
    }

    pub fn product(&self, other: &UniCrystal) -> Result<UniCrystal> {
        if self.ctx.kind() != other.ctx.kind()
            || self.levi_mask != other.levi_mask
            || self.dualized
            || other.dualized
        {
            return Err(Error::Invalid("product factors must share context and flags".into()));
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(UniCrystal {
            ctx: self.ctx.clone(),
            factors,
            levi_mask: self.levi_mask.clone(),
            dualized: false,
        })
    }

    pub fn dual(&self) -> UniCrystal {
        let mut out = self.clone();
        out.dualized = !out.dualized;
        out
    }

    /// Restriction to the Levi subgroup generated by the indices in `js`.
    pub fn restrict_levi(&self, js: &[usize]) -> UniCrystal {
        let mask = match &self.levi_mask {
            None => js.to_vec(),
            Some(old) => old.iter().copied().filter(|i| js.contains(i)).collect(),
        };
        UniCrystal {
            ctx: self.ctx.clone(),
            factors: self.factors.clone(),
            levi_mask: Some(mask),
            dualized: self.dualized,
        }
    }

    fn factor_arity(&self, f: &Factor) -> usize {
        match f {
            Factor::OneDim { .. } => 1,
            Factor::BMinus => {
                let n = self.ctx.n;
                n + n * (n - 1) / 2
            }
        }
    }

    fn slots(&self) -> Vec<Slot<'_>> {
        let mut out = Vec::new();
        let mut offset = 0;
        for f in &self.factors {
            let arity = self.factor_arity(f);
            out.push(Slot {
                factor: f,
                offset,
                arity,
            });
            offset += arity;
        }
        out
    }

    pub fn chart_arity(&self) -> usize {
        self.factors.iter().map(|f| self.factor_arity(f)).sum()
    }

    fn masked(&self, i: usize) -> bool {
        self.levi_mask.as_ref().is_some_and(|js| !js.contains(&i))
    }

    fn factor_supports(&self, f: &Factor, i: usize) -> bool {
        if self.masked(i) {
            return false;
        }
        match f {
            Factor::OneDim { index } => *index == i,
            Factor::BMinus => true,
        }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.ctx.index_count())
            .filter(|&i| self.factors.iter().any(|f| self.factor_supports(f, i)))
            .collect()
    }

    // -- the chart map f ---------------------------------------------------

    /// Matrix of one factor over `arity` variables starting at `offset`.
    fn factor_matrix(&self, slot: &Slot, arity: usize, offset: usize) -> Result<Matrix> {
        match slot.factor {
            Factor::OneDim { index } => {
                matgroup::pi_i(&self.ctx, *index, &RatFunc::var(arity, offset))
            }
            Factor::BMinus => Ok(bminus_matrix(&self.ctx, arity, offset)),
        }
    }

    /// The raw (unmasked, undualized) product of factor matrices.
    fn f_matrix_raw(&self) -> Result<Matrix> {
        let m = self.chart_arity();
        let mut out = Matrix::identity(self.ctx.n, m);
        for slot in self.slots() {
            out = out.mul(&self.factor_matrix(&slot, m, slot.offset)?);
        }
        Ok(out)
    }

    /// The chart map into B^- (or into B after dualizing), with the Levi
    /// projection applied when present.
    pub fn f_matrix(&self) -> Result<Matrix> {
        let mut f = self.f_matrix_raw()?;
        if let Some(js) = &self.levi_mask {
            f = matgroup::block_projection(&self.ctx, js, &f);
        }
        if self.dualized {
            f = f.inverse()?;
        }
        Ok(f)
    }

    // -- induced crystal data ----------------------------------------------

    fn factor_gamma(&self, slot: &Slot, m: usize) -> Result<Vec<RatFunc>> {
        match slot.factor {
            Factor::OneDim { index } => {
                let coroot = self.ctx.datum.simple_coroots[*index].clone();
                coroot
                    .iter()
                    .map(|&e| RatFunc::var(m, slot.offset).pow(e))
                    .collect()
            }
            Factor::BMinus => {
                let diag: Vec<RatFunc> =
                    (0..self.ctx.n).map(|k| RatFunc::var(m, slot.offset + k)).collect();
                self.ctx.coords_from_diag(&diag)
            }
        }
    }

    fn factor_phi(&self, slot: &Slot, i: usize, m: usize) -> Result<RatFunc> {
        if !self.factor_supports(slot.factor, i) {
            return Ok(RatFunc::zero(m));
        }
        match slot.factor {
            Factor::OneDim { .. } => RatFunc::var(m, slot.offset).inv(),
            Factor::BMinus => {
                let (r, c) = probe(&self.ctx, i);
                let n = self.ctx.n;
                let below = RatFunc::var(m, slot.offset + n + tri_index(c, r));
                below.div(&RatFunc::var(m, slot.offset + r))
            }
        }
    }

    fn slice_gamma(&self, slots: &[Slot], m: usize) -> Result<Vec<RatFunc>> {
        let mut coords = vec![RatFunc::one(m); self.ctx.rank()];
        for slot in slots {
            let g = self.factor_gamma(slot, m)?;
            for (acc, f) in coords.iter_mut().zip(&g) {
                *acc = acc.mul(f);
            }
        }
        Ok(coords)
    }

    fn slice_phi(&self, slots: &[Slot], i: usize, m: usize) -> Result<RatFunc> {
        // phi of a product: sum of factor phis scaled by alpha_i of the
        // gamma accumulated to the left.
        let mut acc = RatFunc::zero(m);
        let mut gamma_left = vec![RatFunc::one(m); self.ctx.rank()];
        for slot in slots {
            let p = self.factor_phi(slot, i, m)?;
            if !p.is_zero() {
                let alpha = self.ctx.alpha_char(i, &gamma_left)?;
                acc = acc.add(&p.div(&alpha)?);
            }
            let g = self.factor_gamma(slot, m)?;
            for (a, f) in gamma_left.iter_mut().zip(&g) {
                *a = a.mul(f);
            }
        }
        Ok(acc)
    }

    /// gamma = pr_T of f, as torus coordinates over the chart. Dualizing
    /// inverts it; the Levi projection leaves it unchanged.
    pub fn gamma(&self) -> Result<Vec<RatFunc>> {
        let m = self.chart_arity();
        let g = self.slice_gamma(&self.slots(), m)?;
        if self.dualized {
            g.iter().map(|f| f.inv()).collect()
        } else {
            Ok(g)
        }
    }

    /// phi_i = chi_i^- read through f. For the dual crystal this is
    /// -phi_i alpha_i(gamma).
    pub fn phi(&self, i: usize) -> Result<RatFunc> {
        let m = self.chart_arity();
        let base = self.slice_phi(&self.slots(), i, m)?;
        if self.dualized {
            let gamma = self.slice_gamma(&self.slots(), m)?;
            let alpha = self.ctx.alpha_char(i, &gamma)?;
            Ok(base.neg().mul(&alpha))
        } else {
            Ok(base)
        }
    }

    // -- the e_i action of the induced crystal ------------------------------

    /// e_i of the head factor at exponent `c` (ambient has the chart at
    /// variables 0..m, parameters after).
    fn base_e(&self, slot: &Slot, i: usize, c: &RatFunc) -> Result<Vec<RatFunc>> {
        let amb = c.arity();
        match slot.factor {
            Factor::OneDim { index } => {
                debug_assert_eq!(*index, i);
                Ok(vec![RatFunc::var(amb, slot.offset).mul(c)])
            }
            Factor::BMinus => {
                let b = bminus_matrix(&self.ctx, amb, slot.offset);
                let m_full = self.chart_arity();
                let embed: Vec<usize> = (0..m_full).collect();
                let phi = self
                    .factor_phi(slot, i, m_full)?
                    .remap(amb, &embed);
                if phi.is_zero() {
                    return Err(Error::UnsupportedIndex(i));
                }
                let gamma = self
                    .factor_gamma(slot, m_full)?
                    .iter()
                    .map(|f| f.remap(amb, &embed))
                    .collect::<Vec<_>>();
                let alpha = self.ctx.alpha_char(i, &gamma)?;
                let one = RatFunc::one(amb);
                let left = c.sub(&one).div(&phi)?;
                let right = c.inv()?.sub(&one).div(&phi.mul(&alpha))?;
                let img = self
                    .ctx
                    .x(i, &left)
                    .mul(&b)
                    .mul(&self.ctx.x(i, &right));
                extract_bminus_coords(&self.ctx, &img, slot.offset, amb)
            }
        }
    }

    fn e_rec(&self, slots: &[Slot], i: usize, c: &RatFunc) -> Result<Vec<RatFunc>> {
        let amb = c.arity();
        let m_full = self.chart_arity();
        let embed: Vec<usize> = (0..m_full).collect();
        let head = &slots[0];
        let tail = &slots[1..];
        let head_sup = self.factor_supports(head.factor, i);
        let tail_sup = tail.iter().any(|s| self.factor_supports(s.factor, i));
        let ident = |slot: &Slot| -> Vec<RatFunc> {
            (slot.offset..slot.offset + slot.arity)
                .map(|k| RatFunc::var(amb, k))
                .collect()
        };
        if tail.is_empty() {
            return self.base_e(head, i, c);
        }
        match (head_sup, tail_sup) {
            (false, false) => Err(Error::UnsupportedIndex(i)),
            (true, false) => {
                let mut out = self.base_e(head, i, c)?;
                for s in tail {
                    out.extend(ident(s));
                }
                Ok(out)
            }
            (false, true) => {
                let mut out = ident(head);
                out.extend(self.e_rec(tail, i, c)?);
                Ok(out)
            }
            (true, true) => {
                let phi_x = self.factor_phi(head, i, m_full)?.remap(amb, &embed);
                let gamma_x: Vec<RatFunc> = self
                    .factor_gamma(head, m_full)?
                    .iter()
                    .map(|f| f.remap(amb, &embed))
                    .collect();
                let alpha = self.ctx.alpha_char(i, &gamma_x)?;
                let phi_y = self.slice_phi(tail, i, m_full)?.remap(amb, &embed);
                let pa = phi_x.mul(&alpha);
                let d = pa.add(&phi_y);
                let c1 = c.mul(&pa).add(&phi_y).div(&d)?;
                let c2 = d.div(&pa.add(&c.inv()?.mul(&phi_y)))?;
                let mut out = self.base_e(head, i, &c1)?;
                out.extend(self.e_rec(tail, i, &c2)?);
                Ok(out)
            }
        }
    }

    /// Symbolic e_i components over (chart, c): chart at variables 0..m,
    /// c at variable m.
    pub fn e_components_chart_first(&self, i: usize) -> Result<Vec<RatFunc>> {
        if !self.support().contains(&i) {
            return Err(Error::UnsupportedIndex(i));
        }
        let m = self.chart_arity();
        let amb = m + 1;
        let mut c = RatFunc::var(amb, m);
        if self.dualized {
            c = c.inv()?;
        }
        self.e_rec(&self.slots(), i, &c)
    }

    /// Pointwise e_i at an exact rational point.
    pub fn e_at_point(&self, i: usize, c: &Rat, z: &[Rat]) -> Result<Vec<Rat>> {
        if !self.support().contains(&i) {
            return Err(Error::UnsupportedIndex(i));
        }
        if c.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        let c = if self.dualized {
            &Rat::one() / c
        } else {
            c.clone()
        };
        self.e_point_rec(&self.slots(), i, &c, z)
    }

    fn factor_gamma_at(&self, slot: &Slot, z: &[Rat]) -> Result<Vec<Rat>> {
        let m = self.chart_arity();
        self.factor_gamma(slot, m)?
            .iter()
            .map(|f| f.eval(z))
            .collect()
    }

    fn e_point_rec(&self, slots: &[Slot], i: usize, c: &Rat, z: &[Rat]) -> Result<Vec<Rat>> {
        let m = self.chart_arity();
        let head = &slots[0];
        let tail = &slots[1..];
        let head_sup = self.factor_supports(head.factor, i);
        let tail_sup = tail.iter().any(|s| self.factor_supports(s.factor, i));
        let base_point = |slot: &Slot, c: &Rat| -> Result<Vec<Rat>> {
            match slot.factor {
                Factor::OneDim { .. } => Ok(vec![c * &z[slot.offset]]),
                Factor::BMinus => {
                    let comps = self.base_e(
                        slot,
                        i,
                        &RatFunc::var(m + 1, m),
                    )?;
                    let mut point = z.to_vec();
                    point.push(c.clone());
                    comps.iter().map(|f| f.eval(&point)).collect()
                }
            }
        };
        if tail.is_empty() {
            return base_point(head, c);
        }
        match (head_sup, tail_sup) {
            (false, false) => Err(Error::UnsupportedIndex(i)),
            (true, false) => {
                let mut out = base_point(head, c)?;
                out.extend_from_slice(&z[head.offset + head.arity..]);
                Ok(out)
            }
            (false, true) => {
                let mut out = z[head.offset..head.offset + head.arity].to_vec();
                out.extend(self.e_point_rec(tail, i, c, z)?);
                Ok(out)
            }
            (true, true) => {
                let phi_x = self.factor_phi(head, i, m)?.eval(z)?;
                let gamma_x = self.factor_gamma_at(head, z)?;
                let alpha = eval_alpha(&self.ctx, i, &gamma_x)?;
                let phi_y = self.slice_phi(tail, i, m)?.eval(z)?;
                let pa = &phi_x * &alpha;
                let d = &pa + &phi_y;
                let denom2 = &pa + &(&phi_y / c);
                if d.is_zero() || denom2.is_zero() {
                    return Err(Error::PoleAtPoint);
                }
                let c1 = &(&(c * &pa) + &phi_y) / &d;
                let c2 = &d / &denom2;
                if c1.is_zero() || c2.is_zero() {
                    return Err(Error::PoleAtPoint);
                }
                let mut out = base_point(head, &c1)?;
                out.extend(self.e_point_rec(tail, i, &c2, z)?);
                Ok(out)
            }
        }
    }

    // -- the U-action through generators ------------------------------------

    /// Push a generator parameter through one factor:
    /// p' = p / ((1 + p chi_i^-(u_-)) alpha_i(t)).
    fn push_param(&self, slot: &Slot, i: usize, p: &RatFunc) -> Result<RatFunc> {
        let amb = p.arity();
        let m = self.chart_arity();
        let embed: Vec<usize> = (0..m).collect();
        let (chi, alpha) = match slot.factor {
            Factor::OneDim { index } => {
                let chi = if *index == i {
                    RatFunc::var(amb, slot.offset).inv()?
                } else {
                    RatFunc::zero(amb)
                };
                let a_ji = self.ctx.datum.cartan(*index, i);
                (chi, RatFunc::var(amb, slot.offset).pow(a_ji)?)
            }
            Factor::BMinus => {
                let chi = self.factor_phi(slot, i, m)?.remap(amb, &embed);
                let gamma = self
                    .factor_gamma(slot, m)?
                    .iter()
                    .map(|f| f.remap(amb, &embed))
                    .collect::<Vec<_>>();
                (chi, self.ctx.alpha_char(i, &gamma)?)
            }
        };
        let one = RatFunc::one(amb);
        p.div(&one.add(&p.mul(&chi)).mul(&alpha))
    }

    fn local_act(&self, slot: &Slot, i: usize, p: &RatFunc) -> Result<Vec<RatFunc>> {
        let amb = p.arity();
        match slot.factor {
            Factor::OneDim { index } => {
                let z = RatFunc::var(amb, slot.offset);
                Ok(vec![if *index == i { z.add(p) } else { z }])
            }
            Factor::BMinus => {
                let m = self.chart_arity();
                let embed: Vec<usize> = (0..m).collect();
                let b = bminus_matrix(&self.ctx, amb, slot.offset);
                let chi = self.factor_phi(slot, i, m)?.remap(amb, &embed);
                let gamma = self
                    .factor_gamma(slot, m)?
                    .iter()
                    .map(|f| f.remap(amb, &embed))
                    .collect::<Vec<_>>();
                let alpha = self.ctx.alpha_char(i, &gamma)?;
                let one = RatFunc::one(amb);
                let q = p.neg().div(&one.add(&p.mul(&chi)).mul(&alpha))?;
                let img = self.ctx.x(i, p).mul(&b).mul(&self.ctx.x(i, &q));
                extract_bminus_coords(&self.ctx, &img, slot.offset, amb)
            }
        }
    }

    /// The action of x_i(a) on the chart, with the parameter trace: entry k
    /// is the parameter entering factor k, and the final entry is the exit
    /// parameter pi(x_i(a) f(z)).
    pub fn act_u(&self, i: usize, a: &RatFunc) -> Result<(Vec<RatFunc>, Vec<RatFunc>)> {
        if self.masked(i) {
            return Err(Error::UnsupportedIndex(i));
        }
        let mut p = if self.dualized {
            // Transform through f^* first: chi and torus of f^{-1} are
            // -phi alpha_i(gamma) and gamma^{-1}.
            let m = self.chart_arity();
            let amb = a.arity();
            let embed: Vec<usize> = (0..m).collect();
            let slots = self.slots();
            let phi = self.slice_phi(&slots, i, m)?.remap(amb, &embed);
            let gamma: Vec<RatFunc> = self
                .slice_gamma(&slots, m)?
                .iter()
                .map(|f| f.remap(amb, &embed))
                .collect();
            let alpha = self.ctx.alpha_char(i, &gamma)?;
            let chi_star = phi.neg().mul(&alpha);
            let alpha_star = alpha.inv()?;
            let one = RatFunc::one(amb);
            a.div(&one.add(&a.mul(&chi_star)).mul(&alpha_star))?
        } else {
            a.clone()
        };
        let mut coords = Vec::new();
        let mut trace = vec![p.clone()];
        for slot in self.slots() {
            coords.extend(self.local_act(&slot, i, &p)?);
            p = self.push_param(&slot, i, &p)?;
            trace.push(p.clone());
        }
        Ok((coords, trace))
    }

    /// Numeric action of an arbitrary unipotent element, via Gauss
    /// decomposition at each factor. Returns the new point and the exit
    /// element pi(u f(z)).
    pub fn act_u_matrix_point(&self, u: &Matrix, z: &[Rat]) -> Result<(Vec<Rat>, Matrix)> {
        if self.dualized {
            return Err(Error::NotSupported);
        }
        let m = self.chart_arity();
        let mut cur = u.clone();
        let mut out = Vec::new();
        for slot in self.slots() {
            let f = self.factor_matrix(&slot, m, slot.offset)?.eval(z)?;
            let t = gauss(&cur.mul(&f))?;
            let pim = t.pi_minus();
            match slot.factor {
                Factor::OneDim { index } => {
                    let (r, c) = probe(&self.ctx, *index);
                    let entry = t.u_minus.at(c, r);
                    if entry.is_zero() {
                        return Err(Error::PoleAtPoint);
                    }
                    out.push(entry.inv()?.eval(&[])?);
                }
                Factor::BMinus => {
                    let coords = extract_bminus_coords(&self.ctx, &pim, 0, 0)?;
                    for f in coords {
                        out.push(f.eval(&[])?);
                    }
                }
            }
            cur = t.u_plus;
        }
        Ok((out, cur))
    }

    // -- induced geometric crystals ------------------------------------------

    /// Materialize the induced geometric crystal with symbolic e-maps
    /// (variable 0 of each map is the action parameter).
    pub fn induced(&self) -> Result<GeomCrystal> {
        let m = self.chart_arity();
        let support = self.support();
        let mut e_maps = BTreeMap::new();
        for &i in &support {
            let comps = self.e_components_chart_first(i)?;
            // remap (z_0..z_{m-1}, c) -> (c, z_0..z_{m-1})
            let mut map: Vec<usize> = (1..=m).collect();
            map.push(0);
            e_maps.insert(i, comps.iter().map(|f| f.remap(m + 1, &map)).collect());
        }
        self.finish_induced(e_maps)
    }

    /// The induced crystal without symbolic e-maps; evaluation goes through
    /// the pointwise recursion (for large charts used in sampled mode).
    pub fn induced_pointwise(&self) -> Result<GeomCrystal> {
        self.finish_induced(BTreeMap::new())
    }

    fn finish_induced(&self, e_maps: BTreeMap<usize, Vec<RatFunc>>) -> Result<GeomCrystal> {
        let m = self.chart_arity();
        let support = self.support();
        let gamma = self.gamma()?;
        let mut phi = BTreeMap::new();
        for &i in &support {
            phi.insert(i, self.phi(i)?);
        }
        let base = GeomCrystal::new(self.ctx.clone(), m, support, e_maps, gamma, phi)?;
        let backend = Arc::new(self.clone());
        Ok(base.with_point_fn(Arc::new(move |i, c, z| backend.e_at_point(i, c, z))))
    }

    /// JSON document: context descriptor, factor list, f-matrix expressions.
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let m = self.chart_arity();
        let names: Vec<String> = (0..m).map(|k| format!("z{}", k + 1)).collect();
        let f = self.f_matrix()?;
        Ok(serde_json::json!({
            "group": format!("{:?}", self.ctx.kind()),
            "factors": self
                .factors
                .iter()
                .map(|fac| match fac {
                    Factor::OneDim { index } =>
                        format!("pi_{}", self.ctx.datum.index_label(*index)),
                    Factor::BMinus => "bminus".to_string(),
                })
                .collect::<Vec<_>>(),
            "levi_mask": self.levi_mask.as_ref().map(|js| js
                .iter()
                .map(|&j| self.ctx.datum.index_label(j).to_string())
                .collect::<Vec<_>>()),
            "dualized": self.dualized,
            "f": f.to_text(&names),
        }))
    }
}

fn eval_alpha(ctx: &GroupCtx, i: usize, gamma: &[Rat]) -> Result<Rat> {
    let exps = &ctx.datum.simple_roots[i];
    let mut acc = Rat::one();
    for (g, &e) in gamma.iter().zip(exps) {
        if e >= 0 {
            for _ in 0..e {
                acc *= g;
            }
        } else {
            if g.is_zero() {
                return Err(Error::PoleAtPoint);
            }
            for _ in 0..(-e) {
                acc /= g;
            }
        }
    }
    Ok(acc)
}

fn probe(ctx: &GroupCtx, i: usize) -> (usize, usize) {
    // The (row, col) of the x_i probe; chi_i^- reads the transpose entry.
    ctx.x_probe(i)
}

fn tri_index(row: usize, col: usize) -> usize {
    debug_assert!(row > col);
    row * (row - 1) / 2 + col
}

/// The full lower-triangular chart matrix at a variable offset.
pub fn bminus_matrix(ctx: &GroupCtx, arity: usize, offset: usize) -> Matrix {
    let n = ctx.n;
    let mut m = Matrix::identity(n, arity);
    for i in 0..n {
        m.rows[i][i] = RatFunc::var(arity, offset + i);
        for j in 0..i {
            m.rows[i][j] = RatFunc::var(arity, offset + n + tri_index(i, j));
        }
        for j in i + 1..n {
            m.rows[i][j] = RatFunc::zero(arity);
        }
    }
    m
}

/// Chart coordinates of a lower-triangular matrix; errors if an
/// above-diagonal entry survives.
pub fn extract_bminus_coords(
    ctx: &GroupCtx,
    b: &Matrix,
    _offset: usize,
    _arity: usize,
) -> Result<Vec<RatFunc>> {
    let n = ctx.n;
    if !b.is_lower_triangular() {
        return Err(Error::NotInCell);
    }
    let mut out: Vec<RatFunc> = (0..n).map(|i| b.rows[i][i].clone()).collect();
    for i in 1..n {
        for j in 0..i {
            out.push(b.rows[i][j].clone());
        }
    }
    Ok(out)
}

// -- the unipotent Weyl action -----------------------------------------------

/// u_{s_i}(b) = x_i((1 - alpha_i(gamma(b))) / (phi_i(b) alpha_i(gamma(b)))),
/// for a lower-triangular b.
pub fn u_w_generator(ctx: &GroupCtx, i: usize, b: &Matrix) -> Result<Matrix> {
    let phi = ctx.chi_minus_of_lower(i, b)?;
    if phi.is_zero() {
        return Err(Error::NotSupported);
    }
    let alpha = ctx.alpha_char_of_diag(i, &b.diag())?;
    let arity = b.arity();
    let a = RatFunc::one(arity)
        .sub(&alpha)
        .div(&phi.mul(&alpha))?;
    Ok(ctx.x(i, &a))
}

/// u_w along a length-additive splitting w = w' w'':
/// u_w(b) = u_{w'}(w''(b)) u_{w''}(b).
pub fn u_w_split(
    ctx: &GroupCtx,
    w1: &WeylElt,
    w2: &WeylElt,
    b: &Matrix,
) -> Result<Matrix> {
    let u2 = u_w(ctx, w2, b)?;
    let conj = u2.mul(b).mul(&u2.inverse()?);
    if !conj.is_lower_triangular() {
        return Err(Error::NotInCell);
    }
    let u1 = u_w(ctx, w1, &conj)?;
    Ok(u1.mul(&u2))
}

/// u_w through the canonical reduced word.
pub fn u_w(ctx: &GroupCtx, w: &WeylElt, b: &Matrix) -> Result<Matrix> {
    if w.is_identity() {
        return Ok(Matrix::identity(ctx.n, b.arity()));
    }
    let word = w.word().to_vec();
    if word.len() == 1 {
        return u_w_generator(ctx, word[0], b);
    }
    let first = ctx.datum.simple(word[0]);
    let rest = ctx.datum.element(&word[1..]);
    u_w_split(ctx, &first, &rest, b)
}

/// The unipotent Weyl action w(b) = u_w(b) b u_w(b)^-1 on B^-.
pub fn weyl_act_matrix(ctx: &GroupCtx, w: &WeylElt, b: &Matrix) -> Result<Matrix> {
    let u = u_w(ctx, w, b)?;
    let out = u.mul(b).mul(&u.inverse()?);
    if !out.is_lower_triangular() {
        return Err(Error::NotInCell);
    }
    Ok(out)
}

// -- invariant functions -------------------------------------------------------

/// chi with coefficients `coeffs` evaluated on a unit upper-triangular
/// matrix: the sum of the probe entries.
pub fn chi_of_unipotent(ctx: &GroupCtx, coeffs: &[Rat], u: &Matrix) -> RatFunc {
    let mut acc = RatFunc::zero(u.arity());
    for i in 0..ctx.index_count() {
        if coeffs[i].is_zero() {
            continue;
        }
        let entry = ctx.chi_plus_of_unit_upper(i, u);
        acc = acc.add(&entry.mul(&RatFunc::constant(u.arity(), coeffs[i].clone())));
    }
    acc
}

/// chi^w(g) = chi-bar(wbar^-1 g): Gauss-decompose and read the U-factor.
pub fn chi_w(ctx: &GroupCtx, coeffs: &[Rat], w: &WeylElt, g: &Matrix) -> Result<RatFunc> {
    let wb = ctx.wbar(w, g.arity());
    let t = gauss(&wb.inverse()?.mul(g))?;
    Ok(chi_of_unipotent(ctx, coeffs, &t.u_plus))
}

/// f^w_{chi, chi'} = chi^w + chi'^{w^-1} composed with iota.
pub fn f_chi_w(
    ctx: &GroupCtx,
    coeffs: &[Rat],
    coeffs2: &[Rat],
    w: &WeylElt,
    g: &Matrix,
) -> Result<RatFunc> {
    let first = chi_w(ctx, coeffs, w, g)?;
    let second = chi_w(ctx, coeffs2, &w.inv(), &ctx.iota(g)?)?;
    Ok(first.add(&second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomcrys::{self, Mode};
    use crate::matgroup::GroupCtx;
    use crate::sample::Sampler;

    fn var(arity: usize, i: usize) -> RatFunc {
        RatFunc::var(arity, i)
    }

    #[test]
    fn standard_cell_sl2_matrix() {
        let ctx = GroupCtx::sl(2);
        let cell = UniCrystal::standard_cell(&ctx, &[0]).unwrap();
        let f = cell.f_matrix().unwrap();
        let z = var(1, 0);
        assert!(f.at(0, 0).equals(&z));
        assert!(f.at(0, 1).is_zero());
        assert!(f.at(1, 0).is_one());
        assert!(f.at(1, 1).equals(&z.inv().unwrap()));
        assert!(matches!(
            UniCrystal::standard_cell(&ctx, &[0, 0]),
            Err(Error::NotReduced)
        ));
    }

    #[test]
    fn induced_sl2_cell() {
        let ctx = GroupCtx::sl(2);
        let cell = UniCrystal::standard_cell(&ctx, &[0]).unwrap();
        let x = cell.induced().unwrap();
        let z = var(1, 0);
        assert!(x.phi[&0].equals(&z.inv().unwrap()));
        assert!(x.gamma[0].equals(&z));
        assert!(x.gamma[1].equals(&z.inv().unwrap()));
        let e = x.e_map(0).unwrap();
        let c = var(2, 0);
        let zz = var(2, 1);
        assert!(e[0].equals(&c.mul(&zz)));
        assert!(geomcrys::check_pre_crystal(&x).unwrap().passed());
    }

    #[test]
    fn gl3_cell_integrity() {
        let ctx = GroupCtx::gl(3);
        let cell = UniCrystal::standard_cell(&ctx, &[0, 1]).unwrap();
        let f = cell.f_matrix().unwrap();
        // pr_T f = alpha_1^vee(z1) alpha_2^vee(z2)
        let g = cell.gamma().unwrap();
        let z1 = var(2, 0);
        let z2 = var(2, 1);
        assert!(g[0].equals(&z1));
        assert!(g[1].equals(&z2.div(&z1).unwrap()));
        assert!(g[2].equals(&z2.inv().unwrap()));
        // f lands in B^-: the Gauss U-factor is the identity.
        let t = gauss(&f).unwrap();
        assert!(t.u_plus.equals(&Matrix::identity(3, 2)));
        for (k, d) in t.torus.diag().iter().enumerate() {
            let coords = ctx.coords_from_diag(&t.torus.diag()).unwrap();
            assert!(coords[k].equals(&g[k]));
            let _ = d;
        }
        // support is {1, 2}
        assert_eq!(cell.support(), vec![0, 1]);
        // phi via the recursion equals phi read through Gauss.
        for i in 0..2 {
            let phi = cell.phi(i).unwrap();
            let chi = crate::matgroup::chi_bar(&ctx, false, i, &f).unwrap();
            assert!(phi.equals(&chi));
        }
    }

    #[test]
    fn product_concatenates_and_matches() {
        let ctx = GroupCtx::gl(3);
        let a = UniCrystal::standard_cell(&ctx, &[0]).unwrap();
        let b = UniCrystal::standard_cell(&ctx, &[1]).unwrap();
        let ab = a.product(&b).unwrap();
        let direct = UniCrystal::standard_cell(&ctx, &[0, 1]).unwrap();
        assert!(ab.f_matrix().unwrap().equals(&direct.f_matrix().unwrap()));
        // product with the trivial crystal leaves f unchanged: an empty
        // product is the identity matrix.
        let point = UniCrystal {
            ctx: ctx.clone(),
            factors: vec![],
            levi_mask: None,
            dualized: false,
        };
        let with_point = a.product(&point).unwrap();
        assert!(with_point
            .f_matrix()
            .unwrap()
            .equals(&a.f_matrix().unwrap().substitute(&[var(1, 0)]).unwrap()));
    }

    #[test]
    fn act_u_on_sl2_cell_is_translation() {
        let ctx = GroupCtx::sl(2);
        let cell = UniCrystal::standard_cell(&ctx, &[0]).unwrap();
        // ambient: (z, a)
        let a = var(2, 1);
        let (coords, trace) = cell.act_u(0, &a).unwrap();
        let z = var(2, 0);
        assert!(coords[0].equals(&z.add(&a)));
        // exit parameter: pi(x(a) pi_1(z)) = x((a^-1 + 1/z)^-1 z^-2)
        let expect = a
            .div(
                &RatFunc::one(2)
                    .add(&a.mul(&z.inv().unwrap()))
                    .mul(&z.mul(&z)),
            )
            .unwrap();
        assert!(trace.last().unwrap().equals(&expect));
        // Cross-check the exit parameter against a Gauss decomposition.
        let f = cell.f_matrix().unwrap().remap_vars(2, &[0]);
        let m = ctx.x(0, &a).mul(&f);
        let u_plus = gauss(&m).unwrap().u_plus;
        assert!(u_plus.at(0, 1).equals(trace.last().unwrap()));
    }

    #[test]
    fn act_u_nonadjacent_fixes_chart() {
        let ctx = GroupCtx::gl(3);
        let cell = UniCrystal::standard_cell(&ctx, &[1]).unwrap();
        let a = var(2, 1);
        let (coords, _) = cell.act_u(0, &a).unwrap();
        assert!(coords[0].equals(&var(2, 0)));
    }

    #[test]
    fn cocycle_identity_gl3() {
        // pi(u' f(u(x))) pi(u f(x)) = pi(u'u f(x)) for u = x_i(a),
        // u' = x_i(a').
        let ctx = GroupCtx::gl(3);
        for word in [vec![0usize, 1], vec![0, 1, 0]] {
            let cell = UniCrystal::standard_cell(&ctx, &word).unwrap();
            let m = cell.chart_arity();
            let amb = m + 2;
            let a = var(amb, m);
            let ap = var(amb, m + 1);
            for i in 0..2 {
                let (coords, trace) = cell.act_u(i, &a).unwrap();
                let exit1 = trace.last().unwrap().clone();
                // pi(u' f(u(x))): push a' through the cell at the acted point.
                let (_, trace2_base) = cell.act_u(i, &ap).unwrap();
                let exit2_at_moved = trace2_base
                    .last()
                    .unwrap()
                    .substitute(&{
                        let mut imgs = coords.clone();
                        imgs.push(a.clone());
                        imgs.push(ap.clone());
                        imgs
                    })
                    .unwrap();
                // pi((u'u) f(x)): a' + a pushed through at the original point.
                let (_, trace3_base) = cell.act_u(i, &a.add(&ap)).unwrap();
                let exit3 = trace3_base.last().unwrap().clone();
                assert!(exit2_at_moved.add(&exit1).equals(&exit3));
            }
        }
    }

    #[test]
    fn induced_e_matches_direct_action() {
        // e_i^c(x) computed by the product recursion equals the action of
        // x_i((c-1)/phi_i(x)).
        let ctx = GroupCtx::gl(3);
        for word in [vec![0usize, 1], vec![1, 0], vec![0, 1, 0]] {
            let cell = UniCrystal::standard_cell(&ctx, &word).unwrap();
            let m = cell.chart_arity();
            let amb = m + 1;
            let c = var(amb, m);
            for i in 0..2 {
                let recursion = cell.e_components_chart_first(i).unwrap();
                let phi = cell
                    .phi(i)
                    .unwrap()
                    .remap(amb, &(0..m).collect::<Vec<_>>());
                let a = c.sub(&RatFunc::one(amb)).div(&phi).unwrap();
                let (direct, _) = cell.act_u(i, &a).unwrap();
                for (r, d) in recursion.iter().zip(&direct) {
                    assert!(r.equals(d), "mismatch for word {word:?} index {i}");
                }
            }
        }
    }

    #[test]
    fn phi_of_product_formula() {
        // phi_i(x, y) = phi_i(x) + phi_i(y)/alpha_i(gamma(x)).
        let ctx = GroupCtx::gl(3);
        let x = UniCrystal::standard_cell(&ctx, &[0, 1]).unwrap();
        let y = UniCrystal::standard_cell(&ctx, &[0]).unwrap();
        let xy = x.product(&y).unwrap();
        let m = xy.chart_arity();
        for i in 0..2 {
            let phi_xy = xy.phi(i).unwrap();
            let phi_x = x.phi(i).unwrap().remap(m, &[0, 1]);
            let phi_y = y.phi(i).unwrap().remap(m, &[2]);
            let gamma_x: Vec<RatFunc> = x
                .gamma()
                .unwrap()
                .iter()
                .map(|f| f.remap(m, &[0, 1]))
                .collect();
            let alpha = ctx.alpha_char(i, &gamma_x).unwrap();
            let expect = phi_x.add(&phi_y.div(&alpha).unwrap());
            assert!(phi_xy.equals(&expect));
        }
    }

    #[test]
    fn bminus_chart_crystal_axioms() {
        let ctx = GroupCtx::gl(3);
        let cell = UniCrystal::b_minus_cell(&ctx).unwrap();
        assert_eq!(cell.chart_arity(), 6);
        let x = cell.induced().unwrap();
        assert!(geomcrys::check_pre_crystal(&x).unwrap().passed());
    }

    #[test]
    fn dual_cell_f_is_inverse_and_induced_matches_dualize() {
        let ctx = GroupCtx::gl(3);
        for word in [vec![0usize], vec![0, 1]] {
            let cell = UniCrystal::standard_cell(&ctx, &word).unwrap();
            let dual = cell.dual();
            let f = cell.f_matrix().unwrap();
            assert!(dual.f_matrix().unwrap().equals(&f.inverse().unwrap()));
            assert!(dual.dual().f_matrix().unwrap().equals(&f));
            // induced(dual) = dualize(induced): gamma, phi and the e-maps.
            let a = dual.induced().unwrap();
            let b = cell.induced().unwrap().dualize().unwrap();
            for (x, y) in a.gamma.iter().zip(&b.gamma) {
                assert!(x.equals(y));
            }
            for i in a.support.clone() {
                assert!(a.phi[&i].equals(&b.phi[&i]));
                for (x, y) in a.e_map(i).unwrap().iter().zip(b.e_map(i).unwrap()) {
                    assert!(x.equals(y));
                }
            }
            // phi^* = chi^- read through the inverse matrix directly.
            for i in 0..2 {
                let phi_star = dual.phi(i).unwrap();
                let direct =
                    crate::matgroup::chi_bar(&ctx, false, i, &f.inverse().unwrap()).unwrap();
                assert!(phi_star.equals(&direct));
            }
        }
    }

    #[test]
    fn dual_of_sl2_cell_matrix() {
        let ctx = GroupCtx::sl(2);
        let cell = UniCrystal::standard_cell(&ctx, &[0]).unwrap();
        let f = cell.dual().f_matrix().unwrap();
        let z = var(1, 0);
        assert!(f.at(0, 0).equals(&z.inv().unwrap()));
        assert!(f.at(1, 0).equals(&RatFunc::int(1, -1)));
        assert!(f.at(1, 1).equals(&z));
    }

    #[test]
    fn duality_reverses_products() {
        let ctx = GroupCtx::gl(3);
        let x = UniCrystal::standard_cell(&ctx, &[0]).unwrap();
        let y = UniCrystal::standard_cell(&ctx, &[1]).unwrap();
        let lhs = x.product(&y).unwrap().dual().f_matrix().unwrap();
        let rhs = y
            .dual()
            .f_matrix()
            .unwrap()
            .remap_vars(2, &[1])
            .mul(&x.dual().f_matrix().unwrap().remap_vars(2, &[0]));
        assert!(lhs.equals(&rhs));
    }

    #[test]
    fn levi_restriction_kills_cross_block_phi() {
        let ctx = GroupCtx::gl(3);
        let cell = UniCrystal::standard_cell(&ctx, &[0, 1]).unwrap();
        let restricted = cell.restrict_levi(&[0]);
        assert_eq!(restricted.support(), vec![0]);
        assert!(restricted.phi(1).unwrap().is_zero());
        assert!(restricted.phi(0).unwrap().equals(&cell.phi(0).unwrap()));
        // J = I is the identity restriction.
        let full = cell.restrict_levi(&[0, 1]);
        assert!(full.f_matrix().unwrap().equals(&cell.f_matrix().unwrap()));
        // Monoidality: restriction commutes with products on f-matrices.
        let a = UniCrystal::standard_cell(&ctx, &[0]).unwrap();
        let b = UniCrystal::standard_cell(&ctx, &[1]).unwrap();
        let lhs = a.product(&b).unwrap().restrict_levi(&[0]).f_matrix().unwrap();
        let rhs = a
            .restrict_levi(&[0])
            .f_matrix()
            .unwrap()
            .remap_vars(2, &[0])
            .mul(&b.restrict_levi(&[0]).f_matrix().unwrap().remap_vars(2, &[1]));
        assert!(lhs.equals(&rhs));
    }

    #[test]
    fn u_w_reproduces_weyl_action_on_sl2_cell() {
        let ctx = GroupCtx::sl(2);
        let cell = UniCrystal::standard_cell(&ctx, &[0]).unwrap();
        let b = cell.f_matrix().unwrap();
        let s1 = ctx.datum.simple(0);
        let moved = weyl_act_matrix(&ctx, &s1, &b).unwrap();
        // weylAct(s_1) sends z to 1/z on the chart.
        let z = var(1, 0);
        let expect = b.substitute(&[z.inv().unwrap()]).unwrap();
        assert!(moved.equals(&expect));
        assert!(u_w(&ctx, &ctx.datum.identity(), &b)
            .unwrap()
            .equals(&Matrix::identity(2, 1)));
    }

    #[test]
    fn u_w_splitting_independence_s3() {
        let ctx = GroupCtx::gl(3);
        let cell = UniCrystal::b_minus_cell(&ctx).unwrap();
        let b = cell.f_matrix().unwrap();
        let w0 = ctx.datum.element(&[0, 1, 0]);
        let s1 = ctx.datum.simple(0);
        let s2 = ctx.datum.simple(1);
        let a = u_w_split(&ctx, &s1, &s2.mul(&s1), &b).unwrap();
        let c = u_w_split(&ctx, &s1.mul(&s2), &s1, &b).unwrap();
        assert!(a.equals(&c));
        let canon = u_w(&ctx, &w0, &b).unwrap();
        assert!(canon.equals(&a));
    }

    #[test]
    fn chi_w_basics() {
        let ctx = GroupCtx::sl(2);
        let s1 = ctx.datum.simple(0);
        let sb = ctx.sbar(0, 0);
        let one = Rat::one();
        // chi^{s1}(sbar_1) = chi-bar(identity) = 0.
        let v = chi_w(&ctx, &[one.clone()], &s1, &sb).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn chi_w_additivity_on_right_generators() {
        // chi^w(g u) = chi^w(g) + chi(u) for u = x_i(a).
        let ctx = GroupCtx::gl(3);
        let coeffs = vec![Rat::one(), Rat::one()];
        let cell = UniCrystal::standard_cell(&ctx, &[0, 1, 0]).unwrap();
        let w = ctx.datum.element(&[0, 1, 0]);
        let amb = 4;
        let g = cell
            .f_matrix()
            .unwrap()
            .remap_vars(amb, &[0, 1, 2]);
        let a = var(amb, 3);
        for i in 0..2 {
            let lhs = chi_w(&ctx, &coeffs, &w, &g.mul(&ctx.x(i, &a))).unwrap();
            let rhs = chi_w(&ctx, &coeffs, &w, &g).unwrap().add(&a);
            assert!(lhs.equals(&rhs));
        }
    }

    #[test]
    fn e_at_point_matches_symbolic() {
        let ctx = GroupCtx::gl(3);
        let cell = UniCrystal::standard_cell(&ctx, &[0, 1, 0]).unwrap();
        let x = cell.induced().unwrap();
        let mut sampler = Sampler::for_check(7, "e-point");
        for _ in 0..5 {
            let z = sampler.point_pos(3);
            let c = sampler.rat_pos();
            for i in 0..2 {
                let numeric = cell.e_at_point(i, &c, &z).unwrap();
                let mut point = vec![c.clone()];
                point.extend(z.iter().cloned());
                let symbolic: Vec<Rat> = x
                    .e_map(i)
                    .unwrap()
                    .iter()
                    .map(|f| f.eval(&point).unwrap())
                    .collect();
                assert_eq!(numeric, symbolic);
            }
        }
    }

    #[test]
    fn general_matrix_action_matches_generator_action() {
        let ctx = GroupCtx::gl(3);
        let cell = UniCrystal::standard_cell(&ctx, &[0, 1, 0]).unwrap();
        let mut sampler = Sampler::for_check(11, "matrix-act");
        for _ in 0..5 {
            let z = sampler.point_pos(3);
            let a_val = sampler.rat_pos();
            for i in 0..2 {
                let u = ctx.x(i, &RatFunc::constant(0, a_val.clone()));
                let (pt, exit) = cell.act_u_matrix_point(&u, &z).unwrap();
                // generator route
                let amb = 4;
                let a = var(amb, 3);
                let (coords, trace) = cell.act_u(i, &a).unwrap();
                let mut point = z.clone();
                point.push(a_val.clone());
                let sym: Vec<Rat> = coords.iter().map(|f| f.eval(&point).unwrap()).collect();
                assert_eq!(pt, sym);
                let exit_sym = trace.last().unwrap().eval(&point).unwrap();
                let exit_entry = exit.at(i, i + 1).eval(&[]).unwrap();
                assert_eq!(exit_entry, exit_sym);
            }
        }
    }

    #[test]
    fn verma_relations_on_cells() {
        let ctx = GroupCtx::gl(3);
        let cell = UniCrystal::standard_cell(&ctx, &[0, 1, 0]).unwrap();
        let x = cell.induced().unwrap();
        assert!(geomcrys::verify_verma(
            &x,
            geomcrys::VermaPattern::A2,
            0,
            1,
            Mode::Exact
        )
        .unwrap());
        let ctx4 = GroupCtx::gl(4);
        let cell4 = UniCrystal::standard_cell(&ctx4, &[0, 2]).unwrap();
        let x4 = cell4.induced().unwrap();
        assert!(geomcrys::verify_verma(
            &x4,
            geomcrys::VermaPattern::A1A1,
            0,
            2,
            Mode::Exact
        )
        .unwrap());
    }

    #[test]
    fn diagonalization_gl2_exact() {
        // F alpha = delta (id x F) for X = Y = the one-dimensional cell of
        // GL2, with the generator symbolic.
        let ctx = GroupCtx::gl(2);
        let x = UniCrystal::standard_cell(&ctx, &[0]).unwrap();
        let y = UniCrystal::standard_cell(&ctx, &[0]).unwrap();
        // ambient: (zx, zy, a)
        let amb = 3;
        let a = var(amb, 2);
        // LHS: act u on the product, then F.
        let prod = x.product(&y).unwrap();
        let (coords, _) = prod.act_u(0, &a).unwrap();
        let (xp, yp) = (coords[0].clone(), coords[1].clone());
        // v at the moved x: v(f_X(x')) for GL2 is x_1((a+d)/c) with f = pi(z).
        let vx_moved = {
            let f = x.f_matrix().unwrap();
            let fm = f.substitute(&[xp.clone()]).unwrap();
            crate::matgroup::v_map(&ctx, &fm).unwrap()
        };
        let lhs_y = {
            // y-part of F(alpha(u,(x,y))): v_{x'} acting on y'.
            let p = vx_moved.at(0, 1).clone();
            let (c2, _) = y_action(&y, &p, &yp);
            c2
        };
        // RHS: F then the diagonal action.
        let vx = {
            let f = x.f_matrix().unwrap().remap_vars(amb, &[0]);
            crate::matgroup::v_map(&ctx, &f).unwrap()
        };
        let fy = {
            let p = vx.at(0, 1).clone();
            let (c2, _) = y_action(&y, &p, &var(amb, 1));
            c2
        };
        let rhs_y = {
            let (c2, _) = y_action(&y, &a, &fy);
            c2
        };
        assert!(lhs_y.equals(&rhs_y));

        // and the x-parts agree trivially: both are u(x).
        fn y_action(y: &UniCrystal, p: &RatFunc, at: &RatFunc) -> (RatFunc, ()) {
            // act x_1(p) on the 1-dim GL2 cell with coordinate value `at`:
            // z -> z + p.
            let _ = y;
            (at.add(p), ())
        }
    }

    #[test]
    fn to_json_smoke() {
        let ctx = GroupCtx::sl(2);
        let cell = UniCrystal::standard_cell(&ctx, &[0]).unwrap();
        let v = cell.to_json().unwrap();
        assert_eq!(v["factors"][0], "pi_1");
    }
}
