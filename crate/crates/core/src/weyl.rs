//! Root data and Weyl groups for GL(n)/SL(n), the folded C2 inside SL4, and
//! D4; reduced-word machinery, the Demazure star monoid, the projection to a
//! parabolic quotient, sub-torus lattices, and the specialness test.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use crate::error::Error;
use crate::intlin::{self, IMat};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Gl(usize),
    Sl(usize),
    FoldedC2,
    D4,
}

/// Root datum: simple roots and coroots written in a fixed coordinate basis
/// of the (co)character lattices of the maximal torus.
#[derive(Debug)]
pub struct RootDatum {
    pub kind: GroupKind,
    /// Dimension of the torus coordinate system.
    pub rank: usize,
    /// Number of simple indices.
    pub index_count: usize,
    /// Simple roots as character exponent vectors.
    pub simple_roots: IMat,
    /// Simple coroots as cocharacter exponent vectors.
    pub simple_coroots: IMat,
    /// Display labels: "1"-based for types A and C2, the 0-centered labels
    /// 0..3 for D4.
    labels: Vec<String>,
}

pub type DatumRef = Arc<RootDatum>;

impl RootDatum {
    pub fn gl(n: usize) -> DatumRef {
        assert!(n >= 2);
        let mut roots = Vec::new();
        for i in 0..n - 1 {
            let mut r = vec![0i64; n];
            r[i] = 1;
            r[i + 1] = -1;
            roots.push(r);
        }
        Arc::new(RootDatum {
            kind: GroupKind::Gl(n),
            rank: n,
            index_count: n - 1,
            simple_coroots: roots.clone(),
            simple_roots: roots,
            labels: (1..n).map(|i| i.to_string()).collect(),
        })
    }

    pub fn sl(n: usize) -> DatumRef {
        let d = Self::gl(n);
        Arc::new(RootDatum {
            kind: GroupKind::Sl(n),
            rank: d.rank,
            index_count: d.index_count,
            simple_roots: d.simple_roots.clone(),
            simple_coroots: d.simple_coroots.clone(),
            labels: d.labels.clone(),
        })
    }

    /// C2 obtained by folding the A3 diagram (1 <-> 3, 2 fixed). Torus
    /// coordinates (a, b) parametrize diag(a, b/a, a/b, 1/a) ... more
    /// precisely diag(a, a^-1 b, a b^-1, a^-1) inside SL4. The resulting
    /// Cartan pairings are <a1v, a2> = -2 and <a2v, a1> = -1.
    pub fn folded_c2() -> DatumRef {
        Arc::new(RootDatum {
            kind: GroupKind::FoldedC2,
            rank: 2,
            index_count: 2,
            simple_roots: vec![vec![2, -1], vec![-2, 2]],
            simple_coroots: vec![vec![1, 0], vec![0, 1]],
            labels: vec!["1".into(), "2".into()],
        })
    }

    /// D4 with the labeling {0,1,2,3}, 0 the center of the diagram.
    pub fn d4() -> DatumRef {
        let roots = vec![
            vec![0, 1, -1, 0],
            vec![1, -1, 0, 0],
            vec![0, 0, 1, -1],
            vec![0, 0, 1, 1],
        ];
        Arc::new(RootDatum {
            kind: GroupKind::D4,
            rank: 4,
            index_count: 4,
            simple_coroots: roots.clone(),
            simple_roots: roots,
            labels: (0..4).map(|i| i.to_string()).collect(),
        })
    }

    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        dot(&self.simple_coroots[i], &self.simple_roots[j])
    }

    pub fn index_label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn parse_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Invalid(format!("unknown simple index `{label}`")))
    }

    pub fn identity(self: &DatumRef) -> WeylElt {
        WeylElt {
            datum: self.clone(),
            matv: intlin::identity(self.rank),
            matv_inv: intlin::identity(self.rank),
            word: Vec::new(),
        }
    }

    pub fn simple(self: &DatumRef, i: usize) -> WeylElt {
        assert!(i < self.index_count);
        let n = self.rank;
        let mut m = intlin::identity(n);
        // s_i on cocharacters: v -> v - <v, alpha_i> alpha_i^vee.
        for (k, row) in m.iter_mut().enumerate() {
            for l in 0..n {
                row[l] -= self.simple_coroots[i][k] * self.simple_roots[i][l];
            }
        }
        // A reflection is an involution, so it is its own inverse.
        WeylElt {
            datum: self.clone(),
            matv_inv: m.clone(),
            matv: m,
            word: vec![i],
        }
    }

    pub fn element(self: &DatumRef, word: &[usize]) -> WeylElt {
        let mut w = self.identity();
        for &i in word {
            w = w.mul(&self.simple(i));
        }
        w
    }

    /// Express a character vector in the simple-root basis; `None` when it
    /// is not in the rational root span.
    pub fn in_root_basis(&self, v: &[i64]) -> Option<Vec<num_rational::BigRational>> {
        intlin::solve_rational(&self.simple_roots, v)
    }

    /// Sign of a root: +1 when all simple-root coefficients are >= 0, -1
    /// when all are <= 0. Panics on non-roots.
    pub fn root_sign(&self, v: &[i64]) -> i32 {
        use num_traits::Signed;
        let c = self
            .in_root_basis(v)
            .expect("vector is not in the root span");
        if c.iter().all(|x| !x.is_negative()) {
            1
        } else if c.iter().all(|x| !x.is_positive()) {
            -1
        } else {
            panic!("vector is not a root");
        }
    }

    /// The whole Weyl group, BFS order from the identity.
    pub fn all_elements(self: &DatumRef) -> Vec<WeylElt> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        let e = self.identity();
        seen.insert(e.matv.clone());
        queue.push_back(e.clone());
        out.push(e);
        while let Some(w) = queue.pop_front() {
            for i in 0..self.index_count {
                let next = w.mul(&self.simple(i));
                if seen.insert(next.matv.clone()) {
                    queue.push_back(next.clone());
                    out.push(next);
                }
            }
        }
        out
    }

    /// Longest element of the parabolic subgroup generated by `js`.
    pub fn longest(self: &DatumRef, js: &[usize]) -> WeylElt {
        let mut w = self.identity();
        'outer: loop {
            for &j in js {
                // Ascent on the right: w(alpha_j) positive.
                if self.root_sign(&w.apply_char(&self.simple_roots[j])) > 0 {
                    w = w.mul(&self.simple(j));
                    continue 'outer;
                }
            }
            return w;
        }
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A Weyl group element: its action on the cocharacter lattice (with the
/// inverse action cached) plus one stored reduced word, the
/// lexicographically smallest.
#[derive(Debug, Clone)]
pub struct WeylElt {
    pub datum: DatumRef,
    matv: IMat,
    matv_inv: IMat,
    word: Vec<usize>,
}

impl PartialEq for WeylElt {
    fn eq(&self, other: &Self) -> bool {
        self.matv == other.matv
    }
}
impl Eq for WeylElt {}

impl PartialOrd for WeylElt {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for WeylElt {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.matv.cmp(&other.matv)
    }
}

impl WeylElt {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// The stored canonical (lexicographically smallest) reduced word.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn mul(&self, other: &WeylElt) -> WeylElt {
        let matv = intlin::mat_mul(&self.matv, &other.matv);
        let matv_inv = intlin::mat_mul(&other.matv_inv, &self.matv_inv);
        let mut w = WeylElt {
            datum: self.datum.clone(),
            matv,
            matv_inv,
            word: Vec::new(),
        };
        w.word = w.canonical_word();
        w
    }

    pub fn inv(&self) -> WeylElt {
        let mut w = WeylElt {
            datum: self.datum.clone(),
            matv: self.matv_inv.clone(),
            matv_inv: self.matv.clone(),
            word: Vec::new(),
        };
        w.word = w.canonical_word();
        w
    }

    pub fn apply_cochar(&self, v: &[i64]) -> Vec<i64> {
        intlin::mat_vec(&self.matv, v)
    }

    /// Action on characters, determined by invariance of the pairing.
    pub fn apply_char(&self, mu: &[i64]) -> Vec<i64> {
        intlin::mat_vec(&intlin::transpose(&self.matv_inv), mu)
    }

    /// Greedy peeling of smallest left descents yields the lex-smallest
    /// reduced word.
    fn canonical_word(&self) -> Vec<usize> {
        let d = &self.datum;
        let mut cur = self.clone();
        cur.word.clear();
        let mut word = Vec::new();
        loop {
            let mut found = None;
            for i in 0..d.index_count {
                // Left descent: w^-1(alpha_i) negative.
                let img = intlin::mat_vec(&intlin::transpose(&cur.matv), &d.simple_roots[i]);
                if d.root_sign(&img) < 0 {
                    found = Some(i);
                    break;
                }
            }
            match found {
                None => break,
                Some(i) => {
                    word.push(i);
                    let s = d.simple(i);
                    cur = WeylElt {
                        datum: d.clone(),
                        matv: intlin::mat_mul(&s.matv, &cur.matv),
                        matv_inv: intlin::mat_mul(&cur.matv_inv, &s.matv_inv),
                        word: Vec::new(),
                    };
                }
            }
        }
        word
    }

    /// Render like `s1s2s1`, or `e` for the identity.
    pub fn display(&self) -> String {
        if self.word.is_empty() {
            return "e".into();
        }
        self.word
            .iter()
            .map(|&i| format!("s{}", self.datum.index_label(i)))
            .collect()
    }
}

/// All reduced words of `w`, lexicographic order, truncated to `cap`.
pub fn reduced_words(w: &WeylElt, cap: usize) -> Vec<Vec<usize>> {
    fn rec(d: &DatumRef, w: &WeylElt, cap: usize, out: &mut Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
        if out.len() >= cap {
            return;
        }
        if w.is_identity() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..d.index_count {
            let img = intlin::mat_vec(&intlin::transpose(&w.matv), &d.simple_roots[i]);
            if d.root_sign(&img) < 0 {
                prefix.push(i);
                rec(d, &d.simple(i).mul(w), cap, out, prefix);
                prefix.pop();
                if out.len() >= cap {
                    return;
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(&w.datum.clone(), w, cap.max(1), &mut out, &mut Vec::new());
    out
}

/// Demazure (star) product: w * s_i = w s_i when the length grows, else w.
pub fn demazure(w: &WeylElt, other: &WeylElt) -> WeylElt {
    let mut acc = w.clone();
    for &i in other.word() {
        let s = acc.datum.simple(i);
        let grown = acc.mul(&s);
        if grown.len() > acc.len() {
            acc = grown;
        }
    }
    acc
}

/// Star product of the letters of an arbitrary sequence.
pub fn w_star(datum: &DatumRef, seq: &[usize]) -> WeylElt {
    let mut acc = datum.identity();
    for &i in seq {
        acc = demazure(&acc, &datum.simple(i));
    }
    acc
}

/// The monoid homomorphism W -> W_J: keep letters in J, drop the rest,
/// multiplying in the star monoid. Independent of the chosen reduced word.
pub fn project_levi(w: &WeylElt, js: &[usize]) -> WeylElt {
    let d = &w.datum;
    let mut acc = d.identity();
    for &i in w.word() {
        if js.contains(&i) {
            acc = demazure(&acc, &d.simple(i));
        }
    }
    acc
}

/// Saturated cocharacter sublattice, canonical (HNF) basis rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochLattice {
    pub ambient: usize,
    pub basis: IMat,
}

impl CochLattice {
    pub fn zero(ambient: usize) -> Self {
        CochLattice {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn from_rows(rows: &IMat, ambient: usize) -> Self {
        CochLattice {
            ambient,
            basis: intlin::saturate_rows(rows, ambient),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, other: &CochLattice) -> bool {
        intlin::lattice_contains(&self.basis, &other.basis, self.ambient)
    }

    /// Image under a Weyl element (still saturated).
    pub fn apply(&self, w: &WeylElt) -> CochLattice {
        let rows: IMat = self.basis.iter().map(|v| w.apply_cochar(v)).collect();
        CochLattice::from_rows(&rows, self.ambient)
    }

    /// Sum of lattices, saturated.
    pub fn sum(&self, other: &CochLattice) -> CochLattice {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        CochLattice::from_rows(&rows, self.ambient)
    }
}

/// Cocharacter lattice of the sub-torus T_w, the image of t -> w(t) t^-1.
pub fn t_w_lattice(w: &WeylElt) -> CochLattice {
    let n = w.datum.rank;
    let mut rows = Vec::new();
    for k in 0..n {
        let mut e = vec![0i64; n];
        e[k] = 1;
        let mut img = w.apply_cochar(&e);
        img[k] -= 1;
        rows.push(img);
    }
    CochLattice::from_rows(&rows, n)
}

/// Fixed character lattice of w (kernel of the character action minus id).
pub fn fixed_char_lattice(w: &WeylElt) -> IMat {
    let n = w.datum.rank;
    let mut rows = Vec::new();
    for k in 0..n {
        let mut e = vec![0i64; n];
        e[k] = 1;
        let mut img = w.apply_char(&e);
        img[k] -= 1;
        rows.push(img);
    }
    // Character action rows applied to basis vectors sit in columns; the
    // kernel is of the transposed map mu -> (w - 1) mu.
    intlin::kernel(&intlin::transpose(&rows), n)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SpecialReport {
    pub special: bool,
    pub l: usize,
    #[serde(rename = "lProj")]
    pub l_proj: usize,
    pub rank: usize,
}

/// w is J-special when l(w) = l([w]_J) + dim T_{[w]^-1 w}.
pub fn is_special(w: &WeylElt, js: &[usize]) -> SpecialReport {
    let proj = project_levi(w, js);
    let twisted = proj.inv().mul(w);
    let rank = t_w_lattice(&twisted).rank();
    SpecialReport {
        special: w.len() == proj.len() + rank,
        l: w.len(),
        l_proj: proj.len(),
        rank,
    }
}

/// w0(L_J) * w0(L_J') for J inside J'. For GL(m+n) with J' = I and
/// J = I minus {m} this is the element whose explicit reduced word is
/// (s_m...s_1)(s_{m+1}...s_2)...(s_{m+n-1}...s_n).
pub fn w_levi(datum: &DatumRef, js: &[usize], js_big: &[usize]) -> Result<WeylElt> {
    if !js.iter().all(|j| js_big.contains(j)) {
        return Err(Error::Invalid("J must be contained in J'".into()));
    }
    Ok(datum.longest(js).mul(&datum.longest(js_big)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaReport {
    /// I(w): indices whose simple root maps to a simple root.
    pub domain: Vec<usize>,
    /// The partial bijection i -> i' with w(alpha_i) = alpha_{i'}.
    pub zeta: BTreeMap<usize, usize>,
    /// Orbit of each index under the chain through zeta.
    pub orbits: Vec<BTreeSet<usize>>,
    /// Deduplicated orbit supports: the chi-supports of a basis of the
    /// invariant character space.
    pub basis_supports: Vec<BTreeSet<usize>>,
}

/// Orbits of the partial bijection zeta_w and the induced basis supports.
pub fn zeta_orbits(w: &WeylElt) -> ZetaReport {
    let d = &w.datum;
    let mut zeta = BTreeMap::new();
    for i in 0..d.index_count {
        let img = w.apply_char(&d.simple_roots[i]);
        if let Some(j) = (0..d.index_count).find(|&j| d.simple_roots[j] == img) {
            zeta.insert(i, j);
        }
    }
    let zeta_inv: BTreeMap<usize, usize> = zeta.iter().map(|(&a, &b)| (b, a)).collect();
    let mut orbits = Vec::new();
    for i in 0..d.index_count {
        let mut orbit = BTreeSet::new();
        orbit.insert(i);
        let mut cur = i;
        while let Some(&next) = zeta.get(&cur) {
            if !orbit.insert(next) {
                break;
            }
            cur = next;
        }
        cur = i;
        while let Some(&prev) = zeta_inv.get(&cur) {
            if !orbit.insert(prev) {
                break;
            }
            cur = prev;
        }
        orbits.push(orbit);
    }
    let mut basis_supports: Vec<BTreeSet<usize>> = Vec::new();
    for o in &orbits {
        if !basis_supports.contains(o) {
            basis_supports.push(o.clone());
        }
    }
    ZetaReport {
        domain: zeta.keys().copied().collect(),
        zeta,
        orbits,
        basis_supports,
    }
}

/// Cocharacter lattice of the torus attached to a generator sequence by the
/// inductive rule: a single letter gives the coroot line, appending a letter
/// reflects the lattice and, when the star-length drops, adds the coroot
/// line back in.
pub fn tilde_torus_seq(datum: &DatumRef, seq: &[usize]) -> CochLattice {
    let mut lat = CochLattice::zero(datum.rank);
    let mut w = datum.identity();
    for &i in seq {
        let s = datum.simple(i);
        let grown = w.mul(&s);
        let coroot = CochLattice::from_rows(&vec![datum.simple_coroots[i].clone()], datum.rank);
        if grown.len() > w.len() {
            lat = lat.apply(&s);
            w = grown;
        } else {
            lat = lat.apply(&s).sum(&coroot);
        }
    }
    lat
}
