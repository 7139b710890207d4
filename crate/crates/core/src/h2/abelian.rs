//! Abelian Čech cohomology by exact integer linear algebra.
//!
//! This is the independent oracle for every abelian claim in the engine:
//! it shares no code with the nonabelian searches. Cohomology groups are
//! computed from the simplicial coboundary matrices via Smith normal form;
//! classes with coefficients in a finite abelian group are handled through
//! an integer presentation of the coefficient group (generators plus a
//! relation lattice), which reduces coboundary membership and class labels
//! to integer lattice problems. No floating point anywhere.

use std::sync::Arc;

use crate::complexes::Nerve;
use crate::error::{Error, Result};
use crate::groups::{Elem, FiniteGroup};

/// Dense integer matrix, row major. Zero-dimensional matrices are legal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        IntMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a.checked_mul(other.at(k, j)).ok_or(Error::Overflow)?;
                    let sum = out.at(i, j).checked_add(term).ok_or(Error::Overflow)?;
                    out.set(i, j, sum);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = 0i64;
            for (j, &vj) in v.iter().enumerate() {
                let term = self.at(i, j).checked_mul(vj).ok_or(Error::Overflow)?;
                acc = acc.checked_add(term).ok_or(Error::Overflow)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.rows, other.rows, "dimension mismatch");
        let mut out = IntMat::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.at(i, j));
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    /// Kronecker product with the identity: blocks of size `r` per entry.
    pub fn kron_identity(&self, r: usize) -> IntMat {
        let mut out = IntMat::zero(self.rows * r, self.cols * r);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.at(i, j);
                if v != 0 {
                    for k in 0..r {
                        out.set(i * r + k, j * r + k, v);
                    }
                }
            }
        }
        out
    }
}

/// Smith normal form `U * A * V = S` with all four transforms tracked.
#[derive(Debug, Clone)]
pub struct Snf {
    pub s: IntMat,
    pub u: IntMat,
    pub u_inv: IntMat,
    pub v: IntMat,
    pub v_inv: IntMat,
    pub rank: usize,
}

impl Snf {
    /// Nontrivial invariant factors (> 1), in divisibility order.
    pub fn torsion_factors(&self) -> Vec<u64> {
        (0..self.rank)
            .map(|i| self.s.at(i, i).unsigned_abs())
            .filter(|&d| d > 1)
            .collect()
    }
}

pub fn smith_normal_form(a: &IntMat) -> Result<Snf> {
    let mut s = a.clone();
    let mut u = IntMat::identity(a.rows());
    let mut u_inv = IntMat::identity(a.rows());
    let mut v = IntMat::identity(a.cols());
    let mut v_inv = IntMat::identity(a.cols());
    let mut t = 0;
    let limit = a.rows().min(a.cols());
    while t < limit {
        let pivot = match find_pivot(&s, t) {
            Some(p) => p,
            None => break,
        };
        swap_rows(&mut s, &mut u, &mut u_inv, t, pivot.0)?;
        swap_cols(&mut s, &mut v, &mut v_inv, t, pivot.1)?;
        loop {
            let mut dirty = false;
            for i in t + 1..s.rows() {
                while s.at(i, t) != 0 {
                    let q = s.at(i, t).div_euclid(s.at(t, t));
                    add_row(&mut s, &mut u, &mut u_inv, i, t, -q)?;
                    if s.at(i, t) != 0 {
                        swap_rows(&mut s, &mut u, &mut u_inv, t, i)?;
                        dirty = true;
                    }
                }
            }
            for j in t + 1..s.cols() {
                while s.at(t, j) != 0 {
                    let q = s.at(t, j).div_euclid(s.at(t, t));
                    add_col(&mut s, &mut v, &mut v_inv, j, t, -q)?;
                    if s.at(t, j) != 0 {
                        swap_cols(&mut s, &mut v, &mut v_inv, t, j)?;
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        // Divisibility: the pivot must divide every remaining entry.
        let mut offender = None;
        'scan: for i in t + 1..s.rows() {
            for j in t + 1..s.cols() {
                if s.at(i, j) % s.at(t, t) != 0 {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            add_row(&mut s, &mut u, &mut u_inv, t, i, 1)?;
            continue;
        }
        if s.at(t, t) < 0 {
            negate_row(&mut s, &mut u, &mut u_inv, t)?;
        }
        t += 1;
    }
    debug_assert!(u.mul(a).unwrap().mul(&v).unwrap() == s);
    Ok(Snf {
        rank: t,
        s,
        u,
        u_inv,
        v,
        v_inv,
    })
}

fn find_pivot(s: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i64)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = s.at(i, j).abs();
            if x != 0 && best.is_none_or(|(_, _, b)| x < b) {
                best = Some((i, j, x));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn swap_rows(s: &mut IntMat, u: &mut IntMat, u_inv: &mut IntMat, a: usize, b: usize) -> Result<()> {
    if a == b {
        return Ok(());
    }
    for j in 0..s.cols() {
        let (x, y) = (s.at(a, j), s.at(b, j));
        s.set(a, j, y);
        s.set(b, j, x);
    }
    for j in 0..u.cols() {
        let (x, y) = (u.at(a, j), u.at(b, j));
        u.set(a, j, y);
        u.set(b, j, x);
    }
    // Row swap on the left is E * S; U_inv picks up E^{-1} on the right,
    // which is the column swap.
    for i in 0..u_inv.rows() {
        let (x, y) = (u_inv.at(i, a), u_inv.at(i, b));
        u_inv.set(i, a, y);
        u_inv.set(i, b, x);
    }
    Ok(())
}

fn swap_cols(s: &mut IntMat, v: &mut IntMat, v_inv: &mut IntMat, a: usize, b: usize) -> Result<()> {
    if a == b {
        return Ok(());
    }
    for i in 0..s.rows() {
        let (x, y) = (s.at(i, a), s.at(i, b));
        s.set(i, a, y);
        s.set(i, b, x);
    }
    for i in 0..v.rows() {
        let (x, y) = (v.at(i, a), v.at(i, b));
        v.set(i, a, y);
        v.set(i, b, x);
    }
    for j in 0..v_inv.cols() {
        let (x, y) = (v_inv.at(a, j), v_inv.at(b, j));
        v_inv.set(a, j, y);
        v_inv.set(b, j, x);
    }
    Ok(())
}

/// `row_a += q * row_b` on `S`; mirrored on `U`, inverted on `U_inv`.
fn add_row(
    s: &mut IntMat,
    u: &mut IntMat,
    u_inv: &mut IntMat,
    a: usize,
    b: usize,
    q: i64,
) -> Result<()> {
    for j in 0..s.cols() {
        let term = q.checked_mul(s.at(b, j)).ok_or(Error::Overflow)?;
        let val = s.at(a, j).checked_add(term).ok_or(Error::Overflow)?;
        s.set(a, j, val);
    }
    for j in 0..u.cols() {
        let term = q.checked_mul(u.at(b, j)).ok_or(Error::Overflow)?;
        let val = u.at(a, j).checked_add(term).ok_or(Error::Overflow)?;
        u.set(a, j, val);
    }
    for i in 0..u_inv.rows() {
        let term = q.checked_mul(u_inv.at(i, a)).ok_or(Error::Overflow)?;
        let val = u_inv.at(i, b).checked_sub(term).ok_or(Error::Overflow)?;
        u_inv.set(i, b, val);
    }
    Ok(())
}

/// `col_a += q * col_b` on `S`; mirrored on `V`, inverted on `V_inv`.
fn add_col(
    s: &mut IntMat,
    v: &mut IntMat,
    v_inv: &mut IntMat,
    a: usize,
    b: usize,
    q: i64,
) -> Result<()> {
    for i in 0..s.rows() {
        let term = q.checked_mul(s.at(i, b)).ok_or(Error::Overflow)?;
        let val = s.at(i, a).checked_add(term).ok_or(Error::Overflow)?;
        s.set(i, a, val);
    }
    for i in 0..v.rows() {
        let term = q.checked_mul(v.at(i, b)).ok_or(Error::Overflow)?;
        let val = v.at(i, a).checked_add(term).ok_or(Error::Overflow)?;
        v.set(i, a, val);
    }
    for j in 0..v_inv.cols() {
        let term = q.checked_mul(v_inv.at(a, j)).ok_or(Error::Overflow)?;
        let val = v_inv.at(b, j).checked_sub(term).ok_or(Error::Overflow)?;
        v_inv.set(b, j, val);
    }
    Ok(())
}

fn negate_row(s: &mut IntMat, u: &mut IntMat, u_inv: &mut IntMat, a: usize) -> Result<()> {
    for j in 0..s.cols() {
        s.set(a, j, -s.at(a, j));
    }
    for j in 0..u.cols() {
        u.set(a, j, -u.at(a, j));
    }
    for i in 0..u_inv.rows() {
        u_inv.set(i, a, -u_inv.at(i, a));
    }
    Ok(())
}

/// Solve `A x = w` over the integers. Returns one solution (free
/// coordinates zero) or None when no integral solution exists.
pub fn solve_linear(a: &IntMat, w: &[i64]) -> Result<Option<Vec<i64>>> {
    let snf = smith_normal_form(a)?;
    let y = snf.u.mul_vec(w)?;
    let mut x_tilde = vec![0i64; a.cols()];
    for (i, &yi) in y.iter().enumerate() {
        if i < snf.rank {
            let d = snf.s.at(i, i);
            if yi % d != 0 {
                return Ok(None);
            }
            x_tilde[i] = yi / d;
        } else if yi != 0 {
            return Ok(None);
        }
    }
    Ok(Some(snf.v.mul_vec(&x_tilde)?))
}

/// A basis for the lattice spanned by the columns of `m`, as the columns
/// of the returned matrix.
pub fn column_span_basis(m: &IntMat) -> Result<IntMat> {
    let snf = smith_normal_form(m)?;
    let mut basis = IntMat::zero(m.rows(), snf.rank);
    for k in 0..snf.rank {
        let d = snf.s.at(k, k);
        for r in 0..m.rows() {
            let v = snf.u_inv.at(r, k).checked_mul(d).ok_or(Error::Overflow)?;
            basis.set(r, k, v);
        }
    }
    Ok(basis)
}

/// A basis for `{ x : M x in span(lat) }`, where `lat`'s columns span a
/// sublattice of the codomain. Returned as columns; the result always has
/// full column rank equal to `M.cols()` when `lat` is full rank.
pub fn kernel_mod_lattice(m: &IntMat, lat: &IntMat) -> Result<IntMat> {
    if m.rows() == 0 {
        return Ok(IntMat::identity(m.cols()));
    }
    // Kernel of [M | -lat]: x-part spans the preimage lattice.
    let mut neg = lat.clone();
    for i in 0..neg.rows() {
        for j in 0..neg.cols() {
            neg.set(i, j, -neg.at(i, j));
        }
    }
    let aug = m.hcat(&neg);
    let snf = smith_normal_form(&aug)?;
    let total = aug.cols();
    let free = total - snf.rank;
    let mut projected = IntMat::zero(m.cols(), free);
    for (k, col) in (snf.rank..total).enumerate() {
        for r in 0..m.cols() {
            projected.set(r, k, snf.v.at(r, col));
        }
    }
    column_span_basis(&projected)
}

/// The simplicial coboundary matrices of a nerve, with the ordered-tuple
/// sign convention; `d1 * d0 = 0` and `d2 * d1 = 0` are asserted.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    /// Vertices to edges: `(d0 v)(ij) = v_j - v_i`.
    pub d0: IntMat,
    /// Edges to triangles: `(d1 f)(ijk) = f_jk - f_ik + f_ij`.
    pub d1: IntMat,
    /// Triangles to tetrahedra:
    /// `(d2 g)(ijkl) = g_jkl - g_ikl + g_ijl - g_ijk`.
    pub d2: IntMat,
}

pub fn cochain_complex(nerve: &Nerve) -> Result<CochainComplex> {
    let v = nerve.vertex_count();
    let e = nerve.edges().len();
    let t = nerve.triangles().len();
    let tet = nerve.tetrahedra().len();
    let mut d0 = IntMat::zero(e, v);
    for (row, &(i, j)) in nerve.edges().iter().enumerate() {
        d0.set(row, i as usize, -1);
        d0.set(row, j as usize, 1);
    }
    let mut d1 = IntMat::zero(t, e);
    for row in 0..t {
        let [ij, jk, ik] = nerve.triangle_edges(row);
        d1.set(row, jk, d1.at(row, jk) + 1);
        d1.set(row, ik, d1.at(row, ik) - 1);
        d1.set(row, ij, d1.at(row, ij) + 1);
    }
    let mut d2 = IntMat::zero(tet, t);
    for row in 0..tet {
        let [ijk, ikl, jkl, ijl] = nerve.tet_triangles(row);
        d2.set(row, jkl, d2.at(row, jkl) + 1);
        d2.set(row, ikl, d2.at(row, ikl) - 1);
        d2.set(row, ijl, d2.at(row, ijl) + 1);
        d2.set(row, ijk, d2.at(row, ijk) - 1);
    }
    if !d1.mul(&d0)?.is_zero() || !d2.mul(&d1)?.is_zero() {
        return Err(Error::Structure(
            "coboundary matrices do not compose to zero".into(),
        ));
    }
    Ok(CochainComplex { d0, d1, d2 })
}

/// Coefficients for [`abelian_cohomology`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbelianCoeff {
    /// The integers.
    Int,
    /// The integers modulo `m`, `m >= 2`.
    Mod(u64),
}

/// Invariant-factor description of a cohomology group; `0` denotes a free
/// summand. `count` is the number of elements when finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianCohomology {
    pub invariant_factors: Vec<u64>,
    pub count: Option<u64>,
}

impl AbelianCohomology {
    fn from_parts(mut torsion: Vec<u64>, free_rank: usize) -> Self {
        torsion.sort_unstable();
        let count = if free_rank == 0 {
            Some(torsion.iter().product())
        } else {
            None
        };
        let mut invariant_factors = torsion;
        invariant_factors.extend(std::iter::repeat_n(0, free_rank));
        AbelianCohomology {
            invariant_factors,
            count,
        }
    }
}

/// `H^degree` of the nerve with the given coefficients, `degree <= 3`,
/// computed via Smith normal form.
pub fn abelian_cohomology(
    nerve: &Nerve,
    coeff: AbelianCoeff,
    degree: usize,
) -> Result<AbelianCohomology> {
    let complex = cochain_complex(nerve)?;
    let dims = [
        nerve.vertex_count(),
        nerve.edges().len(),
        nerve.triangles().len(),
        nerve.tetrahedra().len(),
    ];
    if degree > 3 {
        return Err(Error::Usage(format!(
            "degree {degree} exceeds the dimension budget of the nerve model"
        )));
    }
    let n = dims[degree];
    // A = d^degree out of C^degree, B = d^(degree-1) into it.
    let a = match degree {
        0 => complex.d0.clone(),
        1 => complex.d1.clone(),
        2 => complex.d2.clone(),
        _ => IntMat::zero(0, n),
    };
    let b = match degree {
        0 => IntMat::zero(n, 0),
        1 => complex.d0.clone(),
        2 => complex.d1.clone(),
        _ => complex.d2.clone(),
    };
    match coeff {
        AbelianCoeff::Int => {
            let snf_a = smith_normal_form(&a)?;
            let snf_b = smith_normal_form(&b)?;
            let free_rank = n - snf_a.rank - snf_b.rank;
            Ok(AbelianCohomology::from_parts(
                snf_b.torsion_factors(),
                free_rank,
            ))
        }
        AbelianCoeff::Mod(m) => {
            if m < 2 {
                return Err(Error::Usage("modulus must be at least 2".into()));
            }
            let m = i64::try_from(m).map_err(|_| Error::Overflow)?;
            let mut codomain_lat = IntMat::identity(a.rows());
            for i in 0..a.rows() {
                codomain_lat.set(i, i, m);
            }
            let z_basis = kernel_mod_lattice(&a, &codomain_lat)?;
            let mut m_identity = IntMat::identity(n);
            for i in 0..n {
                m_identity.set(i, i, m);
            }
            let relations = b.hcat(&m_identity);
            let factors = quotient_factors(&z_basis, &relations)?.0;
            Ok(AbelianCohomology::from_parts(factors, 0))
        }
    }
}

/// Invariant factors of `span(z_basis) / span(relations)`, where every
/// relation column lies in the span of `z_basis` and the quotient is
/// finite. Also returns the label data used for canonical class coordinates.
fn quotient_factors(z_basis: &IntMat, relations: &IntMat) -> Result<(Vec<u64>, QuotientLabels)> {
    // Express relations in z-basis coordinates.
    let mut coords = IntMat::zero(z_basis.cols(), relations.cols());
    let basis_snf = smith_normal_form(z_basis)?;
    for c in 0..relations.cols() {
        let col = relations.column(c);
        let x = solve_with(&basis_snf, z_basis, &col)?.ok_or_else(|| {
            Error::Structure("relation lattice is not contained in the cocycle lattice".into())
        })?;
        for (r, &xr) in x.iter().enumerate().take(z_basis.cols()) {
            coords.set(r, c, xr);
        }
    }
    let snf = smith_normal_form(&coords)?;
    if snf.rank != z_basis.cols() {
        return Err(Error::Structure(
            "quotient by the relation lattice is not finite".into(),
        ));
    }
    let factors = snf.torsion_factors();
    let diag: Vec<i64> = (0..snf.rank).map(|i| snf.s.at(i, i)).collect();
    Ok((
        factors,
        QuotientLabels {
            basis_snf,
            u: snf.u,
            diag,
        },
    ))
}

#[derive(Debug)]
struct QuotientLabels {
    basis_snf: Snf,
    u: IntMat,
    diag: Vec<i64>,
}

fn solve_with(snf: &Snf, a: &IntMat, w: &[i64]) -> Result<Option<Vec<i64>>> {
    let y = snf.u.mul_vec(w)?;
    let mut x_tilde = vec![0i64; a.cols()];
    for (i, &yi) in y.iter().enumerate() {
        if i < snf.rank {
            let d = snf.s.at(i, i);
            if yi % d != 0 {
                return Ok(None);
            }
            x_tilde[i] = yi / d;
        } else if yi != 0 {
            return Ok(None);
        }
    }
    Ok(Some(snf.v.mul_vec(&x_tilde)?))
}

/// Integer presentation of a finite abelian group: a generating tuple, a
/// discrete-log table, and the relation lattice of the generators.
#[derive(Debug, Clone)]
pub struct AbelianPresentation {
    group: Arc<FiniteGroup>,
    generators: Vec<Elem>,
    dlog: Vec<Vec<i64>>,
    /// Square full-rank basis of `ker(Z^r -> group)`, columns.
    relation_lattice: IntMat,
}

impl AbelianPresentation {
    pub fn new(group: &Arc<FiniteGroup>) -> Result<Self> {
        if !group.is_abelian() {
            return Err(Error::Structure(
                "abelian presentation of a nonabelian group".into(),
            ));
        }
        let generators = group.minimal_generating_set();
        let r = generators.len();
        // Discrete logs by BFS over generator multiplication.
        let mut dlog: Vec<Option<Vec<i64>>> = vec![None; group.order()];
        dlog[0] = Some(vec![0; r]);
        let mut queue: Vec<Elem> = vec![0];
        let mut head = 0;
        while head < queue.len() {
            let a = queue[head];
            head += 1;
            for (k, &gen) in generators.iter().enumerate() {
                let next = group.mul(a, gen);
                if dlog[next as usize].is_none() {
                    let mut exps = dlog[a as usize].clone().unwrap();
                    exps[k] += 1;
                    dlog[next as usize] = Some(exps);
                    queue.push(next);
                }
            }
        }
        let dlog: Vec<Vec<i64>> = dlog
            .into_iter()
            .map(|x| x.expect("generators generate the group"))
            .collect();
        // Relation lattice: all exponent boxes that map to the identity,
        // plus the generator orders on the diagonal.
        let orders: Vec<usize> = generators.iter().map(|&g| group.element_order(g)).collect();
        let mut kernel_vectors: Vec<Vec<i64>> = Vec::new();
        for (k, &o) in orders.iter().enumerate() {
            let mut v = vec![0i64; r];
            v[k] = o as i64;
            kernel_vectors.push(v);
        }
        let mut exps = vec![0usize; r];
        loop {
            let elem = exps.iter().enumerate().fold(0 as Elem, |acc, (k, &e)| {
                let mut x = acc;
                for _ in 0..e {
                    x = group.mul(x, generators[k]);
                }
                x
            });
            if elem == 0 && exps.iter().any(|&e| e != 0) {
                kernel_vectors.push(exps.iter().map(|&e| e as i64).collect());
            }
            // Odometer over the box of generator orders.
            let mut k = 0;
            loop {
                if k == r {
                    break;
                }
                exps[k] += 1;
                if exps[k] < orders[k] {
                    break;
                }
                exps[k] = 0;
                k += 1;
            }
            if k == r {
                break;
            }
        }
        let mut gens_mat = IntMat::zero(r, kernel_vectors.len());
        for (c, v) in kernel_vectors.iter().enumerate() {
            for (row, &x) in v.iter().enumerate() {
                gens_mat.set(row, c, x);
            }
        }
        let relation_lattice = column_span_basis(&gens_mat)?;
        debug_assert_eq!(relation_lattice.cols(), r);
        Ok(AbelianPresentation {
            group: Arc::clone(group),
            generators,
            dlog,
            relation_lattice,
        })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dlog(&self, a: Elem) -> &[i64] {
        &self.dlog[a as usize]
    }

    /// Evaluate an exponent vector back into the group.
    pub fn eval(&self, exps: &[i64]) -> Elem {
        let mut out = 0 as Elem;
        for (k, &e) in exps.iter().enumerate() {
            let o = self.group.element_order(self.generators[k]) as i64;
            let mut e = e % o;
            if e < 0 {
                e += o;
            }
            for _ in 0..e {
                out = self.group.mul(out, self.generators[k]);
            }
        }
        out
    }
}

/// `I_blocks (x) l`: block-diagonal with `l` repeated.
fn block_diag(l: &IntMat, blocks: usize) -> IntMat {
    let r = l.rows();
    let c = l.cols();
    let mut out = IntMat::zero(blocks * r, blocks * c);
    for b in 0..blocks {
        for i in 0..r {
            for j in 0..c {
                out.set(b * r + i, b * c + j, l.at(i, j));
            }
        }
    }
    out
}

/// A canonical label for a class in `H^2(X, G')`: coordinates in the
/// invariant-factor decomposition. Equal labels mean equal classes; the
/// all-zero label is the trivial class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianH2Class {
    coords: Vec<u64>,
}

impl AbelianH2Class {
    pub fn is_trivial(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

/// Precomputed lattice data for deciding and labelling classes of
/// 2-cocycles with coefficients in a finite abelian group.
///
/// Coboundary membership ("is this class trivial?") is decided by solving
/// an integer linear system over the coefficient presentation, which is
/// the Smith-normal-form oracle path; it never touches the nonabelian
/// equivalence search.
#[derive(Debug)]
pub struct AbelianH2Context {
    nerve: Arc<Nerve>,
    pres: AbelianPresentation,
    /// `[d1 (x) I_r | I_T (x) L]`: coboundaries plus relation slack.
    witness_mat: IntMat,
    witness_snf: Snf,
    z_basis: IntMat,
    labels: QuotientLabels,
    structure: AbelianCohomology,
}

impl AbelianH2Context {
    pub fn new(nerve: &Arc<Nerve>, group: &Arc<FiniteGroup>) -> Result<Self> {
        let pres = AbelianPresentation::new(group)?;
        let r = pres.rank();
        let complex = cochain_complex(nerve)?;
        let t = nerve.triangles().len();
        let tet = nerve.tetrahedra().len();
        let d1r = complex.d1.kron_identity(r);
        let d2r = complex.d2.kron_identity(r);
        let lat_t = block_diag(&pres.relation_lattice, t);
        let lat_tet = block_diag(&pres.relation_lattice, tet);
        let witness_mat = d1r.hcat(&lat_t);
        let witness_snf = smith_normal_form(&witness_mat)?;
        let z_basis = kernel_mod_lattice(&d2r, &lat_tet)?;
        let (factors, labels) = quotient_factors(&z_basis, &witness_mat)?;
        let structure = AbelianCohomology::from_parts(factors, 0);
        Ok(AbelianH2Context {
            nerve: Arc::clone(nerve),
            pres,
            witness_mat,
            witness_snf,
            z_basis,
            labels,
            structure,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.pres.group()
    }

    pub fn nerve(&self) -> &Arc<Nerve> {
        &self.nerve
    }

    /// The group `H^2(X, G')` itself, as invariant factors.
    pub fn structure(&self) -> &AbelianCohomology {
        &self.structure
    }

    fn check_input(&self, z: &crate::h2::TwoCochain) -> Result<()> {
        if !crate::groups::same_group(z.group(), self.pres.group()) {
            return Err(Error::Mismatch(
                "2-cochain is not valued in the context's coefficient group".into(),
            ));
        }
        if *z.nerve() != self.nerve {
            return Err(Error::Mismatch(
                "2-cochain lives on a different nerve".into(),
            ));
        }
        Ok(())
    }

    /// The abelian 2-cocycle condition, checked directly in the group.
    pub fn is_cocycle(&self, z: &crate::h2::TwoCochain) -> Result<bool> {
        self.check_input(z)?;
        let g = self.pres.group();
        Ok((0..self.nerve.tetrahedra().len()).all(|tet| {
            let [ijk, ikl, jkl, ijl] = self.nerve.tet_triangles(tet);
            let plus = g.mul(z.value(jkl), z.value(ijl));
            let minus = g.mul(z.value(ikl), z.value(ijk));
            plus == minus
        }))
    }

    fn flat_dlog(&self, z: &crate::h2::TwoCochain) -> Vec<i64> {
        let r = self.pres.rank();
        let mut w = Vec::with_capacity(z.values().len() * r);
        for &x in z.values() {
            w.extend_from_slice(self.pres.dlog(x));
        }
        w
    }

    /// Canonical class label of a 2-cocycle.
    pub fn class_of(&self, z: &crate::h2::TwoCochain) -> Result<AbelianH2Class> {
        self.check_input(z)?;
        if !self.is_cocycle(z)? {
            return Err(Error::NotCocycle("abelian class of a non-cocycle".into()));
        }
        let w = self.flat_dlog(z);
        let c = solve_with(&self.labels.basis_snf, &self.z_basis, &w)?
            .expect("cocycles lie in the cocycle lattice");
        let y = self.labels.u.mul_vec(&c)?;
        let coords = y
            .iter()
            .zip(&self.labels.diag)
            .filter(|(_, &d)| d > 1)
            .map(|(&yi, &d)| yi.rem_euclid(d) as u64)
            .collect();
        let class = AbelianH2Class { coords };
        debug_assert_eq!(
            class.is_trivial(),
            self.coboundary_witness(z).unwrap().is_some(),
            "label and membership routes disagree"
        );
        Ok(class)
    }

    /// A 1-cochain `h` with `d1 h = z`, when the class of `z` is trivial.
    pub fn coboundary_witness(
        &self,
        z: &crate::h2::TwoCochain,
    ) -> Result<Option<crate::h1::OneCochain>> {
        self.check_input(z)?;
        let w = self.flat_dlog(z);
        let solution = solve_with(&self.witness_snf, &self.witness_mat, &w)?;
        let Some(x) = solution else {
            return Ok(None);
        };
        let r = self.pres.rank();
        let edges = self.nerve.edges().len();
        let values: Vec<Elem> = (0..edges)
            .map(|e| self.pres.eval(&x[e * r..(e + 1) * r]))
            .collect();
        let h = crate::h1::OneCochain::from_values(&self.nerve, self.pres.group(), values)?;
        #[cfg(debug_assertions)]
        {
            let g = self.pres.group();
            for t in 0..self.nerve.triangles().len() {
                let [ij, jk, ik] = self.nerve.triangle_edges(t);
                let coboundary = g.mul(g.mul(h.value(ij), h.value(jk)), g.inv(h.value(ik)));
                debug_assert_eq!(coboundary, z.value(t), "witness does not bound z");
            }
        }
        Ok(Some(h))
    }

    /// Equal classes, decided on the difference cocycle.
    pub fn classes_equal(
        &self,
        a: &crate::h2::TwoCochain,
        b: &crate::h2::TwoCochain,
    ) -> Result<bool> {
        Ok(self.class_of(a)? == self.class_of(b)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::builtin_complex;
    use crate::groups::builtin_group;

    #[test]
    fn snf_of_a_known_matrix() {
        // [[2, 4], [6, 8]] has invariant factors (2, 4).
        let a = IntMat::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&a).unwrap();
        assert_eq!(snf.rank, 2);
        assert_eq!(snf.s.at(0, 0), 2);
        assert_eq!(snf.s.at(1, 1), 4);
        // Transform invariants.
        assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.s);
        assert_eq!(
            snf.u.mul(&snf.u_inv).unwrap(),
            IntMat::identity(2),
            "u_inv tracks u"
        );
        assert_eq!(snf.v.mul(&snf.v_inv).unwrap(), IntMat::identity(2));
    }

    #[test]
    fn snf_handles_empty_and_zero_matrices() {
        let z = IntMat::zero(0, 3);
        assert_eq!(smith_normal_form(&z).unwrap().rank, 0);
        let z = IntMat::zero(3, 0);
        assert_eq!(smith_normal_form(&z).unwrap().rank, 0);
        let z = IntMat::zero(2, 2);
        assert_eq!(smith_normal_form(&z).unwrap().rank, 0);
    }

    #[test]
    fn solve_linear_examples() {
        let a = IntMat::from_rows(vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(solve_linear(&a, &[4, 9]).unwrap(), Some(vec![2, 3]));
        assert_eq!(solve_linear(&a, &[1, 0]).unwrap(), None);
    }

    #[test]
    fn snf_transform_invariants_on_seeded_random_matrices() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..40 {
            let rows = rng.random_range(1..5);
            let cols = rng.random_range(1..5);
            let mut a = IntMat::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a.set(i, j, rng.random_range(-4..5));
                }
            }
            let snf = smith_normal_form(&a).unwrap();
            assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.s);
            assert_eq!(snf.u.mul(&snf.u_inv).unwrap(), IntMat::identity(rows));
            assert_eq!(snf.v.mul(&snf.v_inv).unwrap(), IntMat::identity(cols));
            for i in 0..snf.rank.saturating_sub(1) {
                assert_eq!(snf.s.at(i + 1, i + 1) % snf.s.at(i, i), 0);
            }
        }
    }

    #[test]
    fn coboundaries_compose_to_zero_on_all_builtins() {
        for name in crate::complexes::BUILTIN_COMPLEX_NAMES {
            let k = builtin_complex(name).unwrap();
            cochain_complex(&k).unwrap();
        }
    }

    /// Independent oracle for Z_p coefficients: cohomology dimension by
    /// Gaussian elimination over the prime field.
    #[allow(clippy::needless_range_loop)]
    fn fp_rank(m: &IntMat, p: i64) -> usize {
        let mut rows: Vec<Vec<i64>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.at(i, j).rem_euclid(p)).collect())
            .collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][c] % p != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = mod_inverse(rows[rank][c], p);
            for x in rows[rank].iter_mut() {
                *x = (*x * inv).rem_euclid(p);
            }
            for i in 0..rows.len() {
                if i != rank && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for j in 0..m.cols() {
                        rows[i][j] = (rows[i][j] - f * rows[rank][j]).rem_euclid(p);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn mod_inverse(a: i64, p: i64) -> i64 {
        let mut result = 1i64;
        let mut base = a.rem_euclid(p);
        let mut exp = p - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        result
    }

    #[test]
    fn mod_p_class_counts_match_the_field_oracle() {
        for name in ["sphere2_tet", "torus7", "rp2_6", "sphere3_pent"] {
            let k = builtin_complex(name).unwrap();
            let complex = cochain_complex(&k).unwrap();
            let dims = [
                k.vertex_count(),
                k.edges().len(),
                k.triangles().len(),
                k.tetrahedra().len(),
            ];
            for p in [2i64, 3, 5] {
                for degree in 0..=3usize {
                    let a = match degree {
                        0 => complex.d0.clone(),
                        1 => complex.d1.clone(),
                        2 => complex.d2.clone(),
                        _ => IntMat::zero(0, dims[3]),
                    };
                    let b = match degree {
                        0 => IntMat::zero(dims[0], 0),
                        1 => complex.d0.clone(),
                        2 => complex.d1.clone(),
                        _ => complex.d2.clone(),
                    };
                    let dim = dims[degree] - fp_rank(&a, p) - fp_rank(&b, p);
                    let expected = (p as u64).pow(dim as u32);
                    let got = abelian_cohomology(&k, AbelianCoeff::Mod(p as u64), degree)
                        .unwrap()
                        .count
                        .unwrap();
                    assert_eq!(got, expected, "H^{degree}({name}, Z_{p})");
                }
            }
        }
    }

    #[test]
    fn integer_cohomology_of_the_builtin_spaces() {
        let k = builtin_complex("sphere2_tet").unwrap();
        assert_eq!(
            abelian_cohomology(&k, AbelianCoeff::Int, 2)
                .unwrap()
                .invariant_factors,
            vec![0]
        );
        let k = builtin_complex("sphere3_pent").unwrap();
        assert_eq!(
            abelian_cohomology(&k, AbelianCoeff::Int, 3)
                .unwrap()
                .invariant_factors,
            vec![0]
        );
        let k = builtin_complex("torus7").unwrap();
        assert_eq!(
            abelian_cohomology(&k, AbelianCoeff::Int, 1)
                .unwrap()
                .invariant_factors,
            vec![0, 0]
        );
        assert_eq!(
            abelian_cohomology(&k, AbelianCoeff::Int, 2)
                .unwrap()
                .invariant_factors,
            vec![0],
            "orientable surface"
        );
        let k = builtin_complex("rp2_6").unwrap();
        assert_eq!(
            abelian_cohomology(&k, AbelianCoeff::Int, 1)
                .unwrap()
                .invariant_factors,
            Vec::<u64>::new()
        );
        assert_eq!(
            abelian_cohomology(&k, AbelianCoeff::Int, 2)
                .unwrap()
                .invariant_factors,
            vec![2],
            "nonorientable surface"
        );
    }

    #[test]
    fn mod_m_cohomology_of_the_spheres() {
        let s2 = builtin_complex("sphere2_tet").unwrap();
        for d in [2u64, 3, 4, 5] {
            let h = abelian_cohomology(&s2, AbelianCoeff::Mod(d), 2).unwrap();
            assert_eq!(h.invariant_factors, vec![d]);
            assert_eq!(h.count, Some(d));
        }
        let s3 = builtin_complex("sphere3_pent").unwrap();
        for d in [2u64, 3, 4, 5] {
            let h = abelian_cohomology(&s3, AbelianCoeff::Mod(d), 2).unwrap();
            assert_eq!(h.count, Some(1));
        }
        // Torus H^1 with Z2: four classes, two factors of 2.
        let t = builtin_complex("torus7").unwrap();
        let h = abelian_cohomology(&t, AbelianCoeff::Mod(2), 1).unwrap();
        assert_eq!(h.invariant_factors, vec![2, 2]);
        assert_eq!(h.count, Some(4));
    }

    #[test]
    fn presentation_round_trips_every_element() {
        for name in ["Z2", "Z4", "Z6", "Z2xZ2"] {
            let g = builtin_group(name).unwrap();
            let pres = AbelianPresentation::new(&g).unwrap();
            for a in g.elements() {
                assert_eq!(pres.eval(pres.dlog(a)), a, "{name}");
            }
            // Relation lattice sanity: the quotient has |G| elements.
            let snf = smith_normal_form(&pres.relation_lattice).unwrap();
            let det: i64 = (0..snf.rank).map(|i| snf.s.at(i, i)).product();
            assert_eq!(det.unsigned_abs() as usize, g.order(), "{name}");
        }
        assert!(AbelianPresentation::new(&builtin_group("S3").unwrap()).is_err());
    }
}
