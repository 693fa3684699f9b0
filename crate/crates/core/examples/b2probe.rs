use crystalforge_core::geomcrys::{self};
use crystalforge_core::matgroup::GroupCtx;
use crystalforge_core::unicrys::{self, UniCrystal};
use crystalforge_core::ratfunc::RatFunc;
use crystalforge_core::tropic;
use std::time::Instant;

fn main() {
    let ctx = GroupCtx::gl(3);
    // u_w vs geometric weylAct on the full B^- chart, all w in S3.
    let t = Instant::now();
    let cell = UniCrystal::b_minus_cell(&ctx).unwrap();
    let x = cell.induced().unwrap();
    let b = cell.f_matrix().unwrap();
    for w in ctx.datum.all_elements() {
        if w.is_identity() { continue; }
        let conj = unicrys::weyl_act_matrix(&ctx, &w, &b).unwrap();
        let geo = geomcrys::weyl_act(&x, &w).unwrap();
        let geo_mat = b.substitute(&geo).unwrap();
        assert!(conj.equals(&geo_mat), "mismatch at {}", w.display());
    }
    eprintln!("u_w = weylAct for all S3 on B- chart in {:?}", t.elapsed());

    // chi(eta_w(b)) = chi^{w^-1}(iota(b)) on GL3 cells.
    let t = Instant::now();
    use num_traits::One;
    let one = crystalforge_core::ratfunc::Rat::one();
    for word in [vec![0usize], vec![0,1], vec![0,1,0]] {
        let cellw = UniCrystal::standard_cell(&ctx, &word).unwrap();
        let w = ctx.datum.element(&word);
        let bm = cellw.f_matrix().unwrap();
        let eta = crystalforge_core::matgroup::eta_w(&ctx, false, &w, &bm).unwrap();
        let coeffs = vec![one.clone(), one.clone()];
        let lhs = unicrys::chi_of_unipotent(&ctx, &coeffs, &eta);
        let rhs = unicrys::chi_w(&ctx, &coeffs, &w.inv(), &ctx.iota(&bm).unwrap()).unwrap();
        assert!(lhs.equals(&rhs), "mismatch at {word:?}");
    }
    eprintln!("chi(eta_w(b)) = chi^(w^-1)(iota(b)) exact in {:?}", t.elapsed());

    // W_J-invariance: chi^{w_{L,G}} restricted to the cell chart is fixed by
    // the restricted crystal's s_2 action. GL3, J = {2}.
    let t = Instant::now();
    let w_lg = ctx.datum.longest(&[1]).mul(&ctx.datum.longest(&[0,1]));
    eprintln!("w_LG = {} len {}", w_lg.display(), w_lg.len());
    let zr = crystalforge_core::weyl::zeta_orbits(&w_lg);
    eprintln!("orbits basis: {:?}", zr.basis_supports);
    let word = w_lg.word().to_vec();
    let cellw = UniCrystal::standard_cell(&ctx, &word).unwrap();
    eprintln!("A"); let restricted = cellw.restrict_levi(&[1]);
    eprintln!("B"); let xr = restricted.induced().unwrap();
    eprintln!("C"); let s2 = geomcrys::weyl_act(&xr, &ctx.datum.simple(1)).unwrap();
    let bm = cellw.f_matrix().unwrap();
    let coeffs = vec![one.clone(), one.clone()];
    eprintln!("D"); let chi_on_chart = unicrys::chi_w(&ctx, &coeffs, &w_lg, &bm).unwrap();
    eprintln!("E"); let moved = chi_on_chart.substitute(&s2).unwrap();
    eprintln!("chi^w invariant under restricted s2: {} in {:?}", moved.equals(&chi_on_chart), t.elapsed());

    // f^{w}_{chi,chi^L} on t B^-_{w_LG}: sampled invariance under the
    // unipotent action of W on B^-.
    let t = Instant::now();
    let mut sampler = crystalforge_core::sample::Sampler::for_check(20231210, "fchi");
    let mut tested = 0;
    let mut which: Option<bool> = None;
    'outer: while tested < 20 {
        let vals = sampler.point_pos(4); // z1, z2, t1, t2 (Z(L) = diag(a,b,b))
        let zl = ctx.torus_from_coords(&[
            RatFunc::constant(0, vals[2].clone()),
            RatFunc::constant(0, vals[3].clone()),
            RatFunc::constant(0, vals[3].clone()),
        ]).unwrap();
        let bm = cellw.f_matrix().unwrap().eval(&vals[..2]).unwrap();
        let g = zl.mul(&bm);
        for super_w in [true, false] {
            let wfun = if super_w { w_lg.clone() } else { w_lg.inv() };
            let base = match unicrys::f_chi_w(&ctx, &coeffs, &[one.clone(), num_traits::Zero::zero()], &wfun, &g) {
                Ok(v) => v, Err(_) => continue 'outer };
            let mut all_ok = true;
            for j in 0..2 {
                let s = ctx.datum.simple(j);
                let moved = match unicrys::weyl_act_matrix(&ctx, &s, &g) { Ok(m) => m, Err(_) => continue 'outer };
                let fv = match unicrys::f_chi_w(&ctx, &coeffs, &[one.clone(), num_traits::Zero::zero()], &wfun, &moved) {
                    Ok(v) => v, Err(_) => continue 'outer };
                if !fv.equals(&base) { all_ok = false; }
            }
            if all_ok {
                if which.is_none() { which = Some(super_w); }
            }
        }
        tested += 1;
    }
    eprintln!("f_chi invariance: superscript w_LG works = {:?} in {:?}", which, t.elapsed());

    // GL3 trop box at radius 5.
    let t = Instant::now();
    let cell3 = UniCrystal::standard_cell(&ctx, &[0, 1, 0]).unwrap();
    let c = tropic::trop_crystal(&cell3.induced().unwrap()).unwrap();
    let rep = tropic::verify_w_crystal_box(&c, 5).unwrap();
    eprintln!("GL3 box B=5: {} points {} violations in {:?}", rep.points, rep.violations.len(), t.elapsed());
}
