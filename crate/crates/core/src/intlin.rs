//! Small exact integer linear algebra: Hermite and Smith normal forms,
//! kernels, lattice saturation. Matrices are tiny (rank of a torus), so a
//! straightforward i64 implementation is enough.

pub type IMat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let (n, k) = (a.len(), b.len());
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for (l, brow) in b.iter().enumerate().take(k) {
            let alk = a[i][l];
            if alk == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] = out[i][j].checked_add(alk.checked_mul(brow[j]).unwrap()).unwrap();
            }
        }
    }
    out
}

pub fn mat_vec(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn transpose(a: &IMat) -> IMat {
    if a.is_empty() {
        return Vec::new();
    }
    let (n, m) = (a.len(), a[0].len());
    (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

/// Row-style Hermite normal form (row echelon over ZZ, canonical).
/// Zero rows are dropped, so the result is a canonical basis of the row
/// lattice.
pub fn hnf_rows(rows: &IMat) -> IMat {
    let mut m: IMat = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    if m.is_empty() {
        return m;
    }
    let cols = m[0].len();
    let mut pivot_row = 0;
    for col in 0..cols {
        // Euclidean reduction in this column below pivot_row.
        loop {
            let mut best: Option<usize> = None;
            for (r, row) in m.iter().enumerate().skip(pivot_row) {
                if row[col] != 0 {
                    best = match best {
                        None => Some(r),
                        Some(b) if row[col].abs() < m[b][col].abs() => Some(r),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else { break };
            m.swap(pivot_row, b);
            let p = m[pivot_row][col];
            let mut again = false;
            for r in pivot_row + 1..m.len() {
                if m[r][col] != 0 {
                    let q = div_floor(m[r][col], p);
                    for c in 0..cols {
                        m[r][c] -= q * m[pivot_row][c];
                    }
                    if m[r][col] != 0 {
                        again = true;
                    }
                }
            }
            if !again {
                break;
            }
        }
        if m[pivot_row][col] != 0 {
            if m[pivot_row][col] < 0 {
                for c in 0..cols {
                    m[pivot_row][c] = -m[pivot_row][c];
                }
            }
            // Reduce the rows above.
            let p = m[pivot_row][col];
            for r in 0..pivot_row {
                let q = div_floor(m[r][col], p);
                if q != 0 {
                    for c in 0..cols {
                        m[r][c] -= q * m[pivot_row][c];
                    }
                }
            }
            pivot_row += 1;
            if pivot_row == m.len() {
                break;
            }
        }
    }
    m.truncate(pivot_row);
    m
}

fn div_floor(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

pub fn rank(rows: &IMat) -> usize {
    hnf_rows(rows).len()
}

/// Smith normal form: returns (u, d, v) with `u * a * v = d`, `u`, `v`
/// unimodular and `d` diagonal with divisibility down the diagonal.
pub fn smith(a: &IMat) -> (IMat, IMat, IMat) {
    let n = a.len();
    let m = if n == 0 { 0 } else { a[0].len() };
    let mut d = a.clone();
    let mut u = identity(n);
    let mut v = identity(m);
    let mut t = 0;
    while t < n.min(m) {
        // Find a nonzero pivot in the remaining block.
        let mut piv: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..m {
                if d[i][j] != 0 {
                    piv = match piv {
                        None => Some((i, j)),
                        Some((pi, pj)) if d[i][j].abs() < d[pi][pj].abs() => Some((i, j)),
                        keep => keep,
                    };
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        // Clear row and column t.
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in t + 1..n {
                if d[i][t] != 0 {
                    let q = d[i][t] / d[t][t];
                    for c in 0..m {
                        d[i][c] -= q * d[t][c];
                    }
                    for c in 0..n {
                        u[i][c] -= q * u[t][c];
                    }
                    if d[i][t] != 0 {
                        d.swap(t, i);
                        u.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..m {
                if d[t][j] != 0 {
                    let q = d[t][j] / d[t][t];
                    for r in 0..n {
                        d[r][j] -= q * d[r][t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    if d[t][j] != 0 {
                        for r in 0..n {
                            d[r].swap(t, j);
                        }
                        for r in 0..m {
                            v[r].swap(t, j);
                        }
                        dirty = true;
                    }
                }
            }
        }
        t += 1;
    }
    // Enforce the divisibility chain.
    let r = n.min(m);
    loop {
        let mut fixed = true;
        for i in 0..r.saturating_sub(1) {
            let (a1, a2) = (d[i][i], d[i + 1][i + 1]);
            if a1 != 0 && a2 % a1 != 0 {
                // Standard 2x2 fix-up: add column i+1 to column i, re-clear.
                for row in d.iter_mut() {
                    row[i] += row[i + 1];
                }
                for row in v.iter_mut() {
                    row[i] += row[i + 1];
                }
                // Re-run the whole reduction on the 2x2 block by recursion
                // over the full matrix (cheap at these sizes).
                let (u2, d2, v2) = smith_raw(&d);
                return (mat_mul(&u2, &u), d2, mat_mul(&v, &v2));
            }
        }
        for i in 0..r {
            if d[i][i] < 0 {
                d[i][i] = -d[i][i];
                for row in v.iter_mut() {
                    row[i] = -row[i];
                }
                fixed = false;
            }
        }
        if fixed {
            break;
        }
    }
    (u, d, v)
}

fn smith_raw(a: &IMat) -> (IMat, IMat, IMat) {
    smith(a)
}

/// Inverse of a unimodular integer matrix, via the adjugate.
pub fn unimodular_inverse(m: &IMat) -> IMat {
    let n = m.len();
    let det = idet(m);
    assert!(det == 1 || det == -1, "matrix is not unimodular");
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let sub: IMat = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            inv[i][j] = sign * idet(&sub) * det;
        }
    }
    inv
}

fn idet(m: &IMat) -> i64 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .map(|j| {
                let sub: IMat = (1..n)
                    .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c]).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * idet(&sub)
            })
            .sum(),
    }
}

/// Canonical basis (HNF rows) of the saturation of the row lattice of `rows`
/// inside ZZ^n: all integer vectors lying in its rational span.
pub fn saturate_rows(rows: &IMat, ambient: usize) -> IMat {
    let nz: IMat = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    if nz.is_empty() {
        return Vec::new();
    }
    assert!(nz.iter().all(|r| r.len() == ambient));
    let (_, d, v) = smith(&nz);
    let r = (0..nz.len().min(ambient)).filter(|&i| d[i][i] != 0).count();
    // a = u^-1 d v^-1, so the rational row span of a is that of d v^-1 and
    // its saturation is spanned by the first r rows of v^-1.
    let vinv = unimodular_inverse(&v);
    hnf_rows(&vinv[..r].to_vec())
}

/// Canonical basis of the integer kernel `{x : rows * x = 0}` (x column).
pub fn kernel(rows: &IMat, ambient: usize) -> IMat {
    if rows.is_empty() {
        return hnf_rows(&identity(ambient));
    }
    let (_, d, v) = smith(rows);
    let n = rows.len();
    let r = (0..n.min(ambient)).filter(|&i| d[i][i] != 0).count();
    // a * v has zero columns past r, so the kernel is spanned by the last
    // ambient - r columns of v.
    let vt = transpose(&v);
    hnf_rows(&vt[r..].to_vec())
}

/// Does the saturated lattice spanned by `sup` contain every row of `sub`?
pub fn lattice_contains(sup: &IMat, sub: &IMat, ambient: usize) -> bool {
    let sup_h = if sup.is_empty() { Vec::new() } else { hnf_rows(sup) };
    for v in sub {
        let mut stacked = sup_h.clone();
        stacked.push(v.clone());
        let grown = hnf_rows(&stacked);
        if grown != sup_h {
            return false;
        }
    }
    let _ = ambient;
    true
}

/// Solve `cols * x = target` over the rationals; returns x when the system
/// is consistent. `cols` is given column-wise.
pub fn solve_rational(cols: &[Vec<i64>], target: &[i64]) -> Option<Vec<num_rational::BigRational>> {
    use num_rational::BigRational as Q;
    use num_traits::Zero;
    let n = target.len();
    let m = cols.len();
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            (0..m)
                .map(|j| Q::from_integer(cols[j][i].into()))
                .chain(std::iter::once(Q::from_integer(target[i].into())))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m {
        if let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) {
            a.swap(row, p);
            let inv = a[row][col].clone();
            for c in col..=m {
                a[row][c] = &a[row][c] / &inv;
            }
            for r in 0..n {
                if r != row && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in col..=m {
                        let delta = &f * &a[row][c];
                        a[r][c] = &a[r][c] - &delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
    }
    // Consistency: no row 0 = nonzero.
    for r in row..n {
        if !a[r][m].is_zero() {
            return None;
        }
    }
    let mut x = vec![Q::zero(); m];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][m].clone();
    }
    Some(x)
}
