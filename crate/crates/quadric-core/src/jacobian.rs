//! The bigraded quotient ring attached to a net of quadrics.
//!
//! A net of m quadrics Q_0..Q_{m-1} in the x variables has the potential
//! F = sum mu_i * Q_i, a polynomial of bidegree (1,2). The quotient of
//! k[mu, x] by all partials of F is bigraded; the dimensions of selected
//! graded pieces and multiplication maps between them are what the rest of
//! the library consumes.
//!
//! Each graded piece is computed by plain linear algebra: rows are
//! monomial multiples of the generators expressed in the monomial basis of
//! the piece, and the quotient dimension is the corank. Columns are sorted
//! in descending block order, so pivot columns are leading monomials and
//! the non-pivot columns form the set of standard monomials, a basis of
//! the quotient piece.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::field::{Field, Fp, Rationals};
use crate::linalg::{Echelon, FpEchelon};
use crate::monomial::Monomial;
use crate::poly::{monomial_basis, reduce_mod_p, Homogeneity, Poly, PolyError};
use crate::vars::{Bidegree, VarTable};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum JacobianError {
    QuadricCount { slots: usize, given: usize },
    NotAQuadric { index: usize, found: String },
    WrongPieceDegree { expected: (i64, i64), found: String },
    Poly(PolyError),
}

impl fmt::Display for JacobianError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JacobianError::QuadricCount { slots, given } => {
                write!(f, "table has {slots} mu variables but {given} quadrics were given")
            }
            JacobianError::NotAQuadric { index, found } => {
                write!(f, "generator {index} is not bihomogeneous of bidegree (0,2): {found}")
            }
            JacobianError::WrongPieceDegree { expected, found } => {
                write!(f, "polynomial does not lie in the ({}, {}) piece: {found}", expected.0, expected.1)
            }
            JacobianError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for JacobianError {}

impl From<PolyError> for JacobianError {
    fn from(e: PolyError) -> JacobianError {
        JacobianError::Poly(e)
    }
}

/// A net of quadrics: one quadric per mu variable of the table.
pub struct QuadricNet {
    table: Arc<VarTable>,
    quadrics: Vec<Poly<Rationals>>,
}

impl QuadricNet {
    pub fn new(
        table: Arc<VarTable>,
        quadrics: Vec<Poly<Rationals>>,
    ) -> Result<QuadricNet, JacobianError> {
        if quadrics.len() != table.mu_len() {
            return Err(JacobianError::QuadricCount {
                slots: table.mu_len(),
                given: quadrics.len(),
            });
        }
        for (i, q) in quadrics.iter().enumerate() {
            match q.homogeneity() {
                Homogeneity::Bihomogeneous(b) if b == Bidegree::new(0, 2) => {}
                other => {
                    return Err(JacobianError::NotAQuadric {
                        index: i,
                        found: format!("{other:?}"),
                    })
                }
            }
        }
        Ok(QuadricNet { table, quadrics })
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn quadrics(&self) -> &[Poly<Rationals>] {
        &self.quadrics
    }

    /// F = sum of mu_i * Q_i, bidegree (1,2).
    pub fn potential(&self) -> Poly<Rationals> {
        let mut f = Poly::zero(Rationals, self.table.clone());
        for (mv, q) in self.table.mu_vars().zip(&self.quadrics) {
            let mu = Poly::variable(Rationals, self.table.clone(), mv);
            f = &f + &(&mu * q);
        }
        f
    }

    /// All partials of the potential: the quadrics themselves (partials in
    /// the mu directions, bidegree (0,2)) followed by the x partials
    /// (bidegree (1,1)).
    pub fn generators(&self) -> Vec<Poly<Rationals>> {
        let f = self.potential();
        let mut gens = self.quadrics.clone();
        for xv in self.table.x_vars() {
            gens.push(f.derivative(xv));
        }
        gens
    }
}

fn column_index(columns: &[Monomial]) -> HashMap<Monomial, usize> {
    columns.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()
}

/// Emits every row polynomial of a graded piece: each generator times each
/// monomial of the complementary bidegree, in a fixed deterministic order.
fn for_each_row_poly(
    net: &QuadricNet,
    a: i64,
    b: i64,
    mut sink: impl FnMut(Poly<Rationals>),
) {
    for g in net.generators() {
        let bid = match g.homogeneity() {
            Homogeneity::Bihomogeneous(bid) => bid,
            _ => continue, // zero generator contributes nothing
        };
        let (c, d) = (a - bid.mu as i64, b - bid.x as i64);
        if c < 0 || d < 0 {
            continue;
        }
        for m in monomial_basis(&net.table, Bidegree::new(c as u32, d as u32)) {
            sink(g.mul_monomial(&m));
        }
    }
}

/// One graded piece of the quotient ring over a prime field.
pub struct PieceFp {
    fp: Fp,
    table: Arc<VarTable>,
    bid: (i64, i64),
    columns: Vec<Monomial>,
    col_index: HashMap<Monomial, usize>,
    rows: usize,
    ech: FpEchelon,
    standard_idx: Vec<usize>,
}

pub fn graded_piece_mod(net: &QuadricNet, a: i64, b: i64, p: u64) -> Result<PieceFp, JacobianError> {
    let fp = Fp::new(p);
    let columns = if a < 0 || b < 0 {
        Vec::new()
    } else {
        monomial_basis(&net.table, Bidegree::new(a as u32, b as u32))
    };
    let col_index = column_index(&columns);
    let mut ech = FpEchelon::new(fp, columns.len());
    let mut rows = 0;
    let mut err = None;
    for_each_row_poly(net, a, b, |rp| {
        if err.is_some() {
            return;
        }
        match reduce_mod_p(&rp, fp) {
            Ok(red) => {
                let mut v = vec![0u64; columns.len()];
                for (m, c) in red.iter() {
                    v[col_index[m]] = *c;
                }
                ech.insert(&v);
                rows += 1;
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    let standard_idx = ech.nonpivot_cols();
    Ok(PieceFp {
        fp,
        table: net.table.clone(),
        bid: (a, b),
        columns,
        col_index,
        rows,
        ech,
        standard_idx,
    })
}

impl PieceFp {
    pub fn prime(&self) -> u64 {
        self.fp.modulus()
    }
    pub fn bidegree(&self) -> (i64, i64) {
        self.bid
    }
    pub fn ambient(&self) -> usize {
        self.columns.len()
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn rank(&self) -> usize {
        self.ech.rank()
    }
    pub fn dim(&self) -> usize {
        self.columns.len() - self.ech.rank()
    }
    pub fn standard_monomials(&self) -> Vec<Monomial> {
        self.standard_idx.iter().map(|&i| self.columns[i].clone()).collect()
    }

    /// Coordinates of the class of `p` with respect to the standard
    /// monomial basis of this piece.
    pub fn coords(&self, p: &Poly<Fp>) -> Result<Vec<u64>, JacobianError> {
        let mut v = vec![0u64; self.columns.len()];
        for (m, c) in p.iter() {
            let idx = self.col_index.get(m).ok_or_else(|| JacobianError::WrongPieceDegree {
                expected: self.bid,
                found: p.to_string(),
            })?;
            v[*idx] = *c;
        }
        let nf = self.ech.reduce_vector(&v);
        Ok(self.standard_idx.iter().map(|&i| nf[i]).collect())
    }
}

/// One graded piece over the rationals. Exact but much slower on large
/// pieces than the prime-field version.
pub struct PieceExact {
    bid: (i64, i64),
    columns: Vec<Monomial>,
    col_index: HashMap<Monomial, usize>,
    rows: usize,
    ech: Echelon<Rationals>,
    standard_idx: Vec<usize>,
}

pub fn graded_piece_exact(net: &QuadricNet, a: i64, b: i64) -> PieceExact {
    let columns = if a < 0 || b < 0 {
        Vec::new()
    } else {
        monomial_basis(&net.table, Bidegree::new(a as u32, b as u32))
    };
    let col_index = column_index(&columns);
    let mut ech = Echelon::new(Rationals, columns.len());
    let mut rows = 0;
    for_each_row_poly(net, a, b, |rp| {
        let mut v = vec![Rationals.zero(); columns.len()];
        for (m, c) in rp.iter() {
            v[col_index[m]] = c.clone();
        }
        ech.insert(v);
        rows += 1;
    });
    let standard_idx = ech.nonpivot_cols();
    PieceExact { bid: (a, b), columns, col_index, rows, ech, standard_idx }
}

impl PieceExact {
    pub fn bidegree(&self) -> (i64, i64) {
        self.bid
    }
    pub fn ambient(&self) -> usize {
        self.columns.len()
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn rank(&self) -> usize {
        self.ech.rank()
    }
    pub fn dim(&self) -> usize {
        self.columns.len() - self.ech.rank()
    }
    pub fn standard_monomials(&self) -> Vec<Monomial> {
        self.standard_idx.iter().map(|&i| self.columns[i].clone()).collect()
    }

    pub fn coords(&self, p: &Poly<Rationals>) -> Result<Vec<BigRational>, JacobianError> {
        let mut v = vec![Rationals.zero(); self.columns.len()];
        for (m, c) in p.iter() {
            let idx = self.col_index.get(m).ok_or_else(|| JacobianError::WrongPieceDegree {
                expected: self.bid,
                found: p.to_string(),
            })?;
            v[*idx] = c.clone();
        }
        self.ech.reduce_in_place(&mut v);
        Ok(self.standard_idx.iter().map(|i| v[*i].clone()).collect())
    }
}

/// Matrix of multiplication by `gamma` from one piece to another, rows
/// indexed by the standard monomials of `from`, in coordinates of the
/// standard basis of `to`.
pub fn multiplication_matrix_mod(
    gamma: &Poly<Fp>,
    from: &PieceFp,
    to: &PieceFp,
) -> Result<Vec<Vec<u64>>, JacobianError> {
    let mut rows = Vec::new();
    for s in from.standard_monomials() {
        let prod = gamma.mul_monomial(&s);
        rows.push(to.coords(&prod)?);
    }
    Ok(rows)
}

pub fn matrix_rank_mod(rows: &[Vec<u64>], p: u64, width: usize) -> usize {
    let mut e = FpEchelon::new(Fp::new(p), width);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Checks that the given monomials are a basis of the piece: right count
/// and independent classes.
pub fn monomials_form_basis_mod(
    piece: &PieceFp,
    claimed: &[Monomial],
) -> Result<bool, JacobianError> {
    if claimed.len() != piece.dim() {
        return Ok(false);
    }
    let fp = Fp::new(piece.prime());
    let mut coord_rows = Vec::new();
    for m in claimed {
        if !piece.col_index.contains_key(m) {
            return Ok(false);
        }
        let one = Poly::from_terms(fp, piece.table.clone(), [(m.clone(), 1u64)]);
        coord_rows.push(piece.coords(&one)?);
    }
    Ok(matrix_rank_mod(&coord_rows, piece.prime(), piece.dim()) == claimed.len())
}

/// The four graded dimensions summarizing the middle cohomology of a
/// threefold cut out by a net of three quadrics in seven-dimensional
/// projective space, in weight order.
pub const HODGE_EXPECTED: [usize; 4] = [0, 3, 37, 3];
pub const HODGE_BIDEGREES: [(i64, i64); 4] = [(0, -2), (1, 0), (2, 2), (3, 4)];
pub const DEFAULT_HODGE_PRIMES: [u64; 2] = [32003, 65537];

pub fn hodge_dims_mod(net: &QuadricNet, p: u64) -> Result<[usize; 4], JacobianError> {
    let mut out = [0usize; 4];
    for (slot, (a, b)) in HODGE_BIDEGREES.iter().enumerate() {
        if *a < 0 || *b < 0 {
            out[slot] = 0;
            continue;
        }
        out[slot] = graded_piece_mod(net, *a, *b, p)?.dim();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn small_net() -> QuadricNet {
        let t = VarTable::new(&["m0", "m1"], &["x0", "x1", "x2"]);
        let q0 = parse_poly("x0^2 + x1^2 + x2^2", Rationals, &t).unwrap();
        let q1 = parse_poly("x0^2 + 2*x1^2 + 3*x2^2", Rationals, &t).unwrap();
        QuadricNet::new(t, vec![q0, q1]).unwrap()
    }

    #[test]
    fn validation_catches_bad_input() {
        let t = VarTable::new(&["m0", "m1"], &["x0", "x1", "x2"]);
        let q0 = parse_poly("x0^2", Rationals, &t).unwrap();
        assert!(matches!(
            QuadricNet::new(t.clone(), vec![q0.clone()]),
            Err(JacobianError::QuadricCount { .. })
        ));
        let cubic = parse_poly("x0^3", Rationals, &t).unwrap();
        assert!(matches!(
            QuadricNet::new(t.clone(), vec![q0.clone(), cubic]),
            Err(JacobianError::NotAQuadric { .. })
        ));
        let mixed = parse_poly("m0*x0^2", Rationals, &t).unwrap();
        assert!(matches!(
            QuadricNet::new(t, vec![q0, mixed]),
            Err(JacobianError::NotAQuadric { .. })
        ));
    }

    #[test]
    fn generator_bidegrees() {
        let net = small_net();
        let gens = net.generators();
        assert_eq!(gens.len(), 5);
        for g in &gens[..2] {
            assert_eq!(g.homogeneity(), Homogeneity::Bihomogeneous(Bidegree::new(0, 2)));
        }
        for g in &gens[2..] {
            assert_eq!(g.homogeneity(), Homogeneity::Bihomogeneous(Bidegree::new(1, 1)));
        }
    }

    #[test]
    fn piece_dims_small_net() {
        let net = small_net();
        // No generator fits in (1,0): every mu monomial survives.
        let p10 = graded_piece_mod(&net, 1, 0, 101).unwrap();
        assert_eq!((p10.rows(), p10.dim()), (0, 2));
        // (0,2): the two quadrics are independent among 6 monomials.
        let p02 = graded_piece_mod(&net, 0, 2, 101).unwrap();
        assert_eq!((p02.ambient(), p02.rank(), p02.dim()), (6, 2, 4));
        // (1,1): three independent x-partials among 6 monomials.
        let p11 = graded_piece_mod(&net, 1, 1, 101).unwrap();
        assert_eq!((p11.ambient(), p11.rank(), p11.dim()), (6, 3, 3));
        // Negative degree piece is zero by convention.
        assert_eq!(hodge_dims_mod(&net, 101).unwrap()[0], 0);
    }

    #[test]
    fn exact_and_modular_agree() {
        let net = small_net();
        for (a, b) in [(0, 2), (1, 1), (1, 2), (2, 2), (2, 3)] {
            let exact = graded_piece_exact(&net, a, b);
            for p in [101u64, 32003] {
                let modp = graded_piece_mod(&net, a, b, p).unwrap();
                assert_eq!(exact.dim(), modp.dim(), "piece ({a},{b}) mod {p}");
                assert_eq!(
                    exact.standard_monomials(),
                    modp.standard_monomials(),
                    "standard monomials of ({a},{b}) mod {p}"
                );
            }
        }
    }

    #[test]
    fn coords_and_multiplication() {
        let net = small_net();
        let fp = Fp::new(101);
        let t = net.table().clone();
        let p02 = graded_piece_mod(&net, 0, 2, 101).unwrap();
        // A defining quadric reduces to zero in the quotient.
        let q0 = reduce_mod_p(&net.quadrics()[0], fp).unwrap();
        assert!(p02.coords(&q0).unwrap().iter().all(|&c| c == 0));

        let p00 = graded_piece_mod(&net, 0, 0, 101).unwrap();
        assert_eq!(p00.dim(), 1);
        // Multiplication by x0^2 from the constants hits a nonzero class.
        let gamma = parse_poly("x0^2", fp, &t).unwrap();
        let m = multiplication_matrix_mod(&gamma, &p00, &p02).unwrap();
        assert_eq!(matrix_rank_mod(&m, 101, p02.dim()), 1);
        // Multiplication by something in the ideal is the zero map.
        let m0 = multiplication_matrix_mod(&q0, &p00, &p02).unwrap();
        assert_eq!(matrix_rank_mod(&m0, 101, p02.dim()), 0);
    }

    #[test]
    fn basis_verification() {
        let net = small_net();
        let p02 = graded_piece_mod(&net, 0, 2, 101).unwrap();
        let standard = p02.standard_monomials();
        assert!(monomials_form_basis_mod(&p02, &standard).unwrap());
        // Wrong count fails.
        assert!(!monomials_form_basis_mod(&p02, &standard[..3]).unwrap());
        // x0^2 - x2^2 is in the ideal, so a set containing both x0^2 and
        // x2^2 alongside two others can only span a 3-dimensional space.
        let t = net.table().clone();
        let dependent: Vec<Monomial> = ["x0^2", "x2^2", "x0*x1", "x1*x2"]
            .iter()
            .map(|s| {
                parse_poly(s, Rationals, &t).unwrap().leading().unwrap().0.clone()
            })
            .collect();
        assert!(!monomials_form_basis_mod(&p02, &dependent).unwrap());
    }
}
