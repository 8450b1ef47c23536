//! Sparse multivariate polynomials over an exact coefficient field, stored
//! in canonical form: a sorted term map with no zero coefficients. The term
//! order is the block order from `monomial`, so equal polynomials have
//! identical representations and printing is deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::field::{Field, Fp, Rationals};
use crate::monomial::Monomial;
use crate::vars::{same_table, Bidegree, Var, VarTable};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PolyError {
    TableMismatch,
    FieldMismatch,
    UnknownVariable(String),
    BadPrime { p: u64, detail: String },
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::TableMismatch => write!(f, "polynomials use different variable tables"),
            PolyError::FieldMismatch => write!(f, "polynomials use different coefficient fields"),
            PolyError::UnknownVariable(n) => write!(f, "unknown variable {n}"),
            PolyError::BadPrime { p, detail } => write!(f, "prime {p} unusable: {detail}"),
        }
    }
}

impl std::error::Error for PolyError {}

/// Homogeneity classification of a polynomial with respect to the two
/// grading blocks.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Homogeneity {
    /// The zero polynomial sits in every bidegree.
    Zero,
    Bihomogeneous(Bidegree),
    Mixed,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly<F: Field> {
    field: F,
    table: Arc<VarTable>,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn zero(field: F, table: Arc<VarTable>) -> Poly<F> {
        Poly { field, table, terms: BTreeMap::new() }
    }

    pub fn constant(field: F, table: Arc<VarTable>, c: F::Elem) -> Poly<F> {
        let mut terms = BTreeMap::new();
        if !field.is_zero(&c) {
            terms.insert(Monomial::one(&table), c);
        }
        Poly { field, table, terms }
    }

    pub fn from_int(field: F, table: Arc<VarTable>, n: i64) -> Poly<F> {
        let c = field.from_int(n);
        Poly::constant(field, table, c)
    }

    pub fn variable(field: F, table: Arc<VarTable>, v: Var) -> Poly<F> {
        let m = Monomial::var(&table, v, 1);
        let mut terms = BTreeMap::new();
        terms.insert(m, field.one());
        Poly { field, table, terms }
    }

    pub fn from_terms<I>(field: F, table: Arc<VarTable>, iter: I) -> Poly<F>
    where
        I: IntoIterator<Item = (Monomial, F::Elem)>,
    {
        let mut p = Poly::zero(field, table);
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    /// Leading term under the block order.
    pub fn leading(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> F::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.field.add(e.get(), &c);
                if self.field.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn compat(&self, other: &Poly<F>) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::FieldMismatch);
        }
        if !same_table(&self.table, &other.table) {
            return Err(PolyError::TableMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly<F>) -> Result<Poly<F>, PolyError> {
        self.compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly<F>) -> Result<Poly<F>, PolyError> {
        self.compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly<F>) -> Result<Poly<F>, PolyError> {
        self.compat(other)?;
        let mut out = Poly::zero(self.field.clone(), self.table.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn negated(&self) -> Poly<F> {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect();
        Poly { field: self.field.clone(), table: self.table.clone(), terms }
    }

    pub fn scaled(&self, c: &F::Elem) -> Poly<F> {
        if self.field.is_zero(c) {
            return Poly::zero(self.field.clone(), self.table.clone());
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), self.field.mul(k, c))).collect();
        Poly { field: self.field.clone(), table: self.table.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly<F> {
        let terms = self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect();
        Poly { field: self.field.clone(), table: self.table.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Poly<F> {
        let mut acc = Poly::constant(self.field.clone(), self.table.clone(), self.field.one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: Var) -> Poly<F> {
        let mut out = Poly::zero(self.field.clone(), self.table.clone());
        for (m, c) in &self.terms {
            let e = m.exp(&self.table, v);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.set(&self.table, v, e - 1);
            let k = self.field.mul(c, &self.field.from_int(e as i64));
            out.add_term(m2, k);
        }
        out
    }

    /// Substitute within the same table: variables in `assign` are replaced,
    /// all others stay. Panics if an assigned polynomial lives elsewhere.
    pub fn substitute(&self, assign: &BTreeMap<Var, Poly<F>>) -> Poly<F> {
        self.map_into(&self.table, assign).expect("substitution within one table cannot fail")
    }

    /// General change of ring: every variable is either assigned a
    /// polynomial over `target` or carried over by name.
    pub fn map_into(
        &self,
        target: &Arc<VarTable>,
        assign: &BTreeMap<Var, Poly<F>>,
    ) -> Result<Poly<F>, PolyError> {
        for img in assign.values() {
            if img.field != self.field {
                return Err(PolyError::FieldMismatch);
            }
            if !same_table(&img.table, target) {
                return Err(PolyError::TableMismatch);
            }
        }
        let mut images: Vec<Option<Poly<F>>> = vec![None; self.table.len()];
        let mut out = Poly::zero(self.field.clone(), target.clone());
        for (m, c) in &self.terms {
            let mut term = Poly::constant(self.field.clone(), target.clone(), c.clone());
            for v in m.support() {
                let e = m.exp(&self.table, v);
                let img = match &images[v.0 as usize] {
                    Some(p) => p,
                    None => {
                        let p = match assign.get(&v) {
                            Some(p) => p.clone(),
                            None => {
                                let name = self.table.name(v);
                                let tv = target
                                    .var(name)
                                    .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
                                Poly::variable(self.field.clone(), target.clone(), tv)
                            }
                        };
                        images[v.0 as usize] = Some(p);
                        images[v.0 as usize].as_ref().unwrap()
                    }
                };
                term = &term * &img.pow(e as u32);
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Carry a polynomial into another table purely by variable names.
    pub fn rename_into(&self, target: &Arc<VarTable>) -> Result<Poly<F>, PolyError> {
        self.map_into(target, &BTreeMap::new())
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Homogeneity::Zero,
            Some(m) => m.bidegree(),
        };
        for m in it {
            if m.bidegree() != first {
                return Homogeneity::Mixed;
            }
        }
        Homogeneity::Bihomogeneous(first)
    }

    /// Largest exponent of `v` across the terms.
    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms.keys().map(|m| m.exp(&self.table, v)).max().unwrap_or(0)
    }

    /// Greatest common monomial divisor of all terms (1 for the zero poly).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let mut acc = match it.next() {
            None => return Monomial::one(&self.table),
            Some(m) => m.clone(),
        };
        for m in it {
            acc = acc.gcd(m);
        }
        acc
    }

    pub fn divide_by_monomial(&self, m: &Monomial) -> Option<Poly<F>> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(m.divide_into(k)?, c.clone());
        }
        Some(Poly { field: self.field.clone(), table: self.table.clone(), terms })
    }

    /// Exact division: `Some(q)` with `self == q*g`, or `None` when no such
    /// quotient exists. Runs leading-term reduction; the first leading term
    /// not divisible by the leading term of `g` would survive into the
    /// remainder, so it ends the search.
    pub fn exact_divide(&self, g: &Poly<F>) -> Option<Poly<F>> {
        self.compat(g).ok()?;
        let (gm, gc) = g.leading()?;
        let gcinv = self.field.inv(gc).expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut q = Poly::zero(self.field.clone(), self.table.clone());
        while let Some((m, c)) = rem.leading() {
            let t = gm.divide_into(m)?;
            let f = self.field.mul(c, &gcinv);
            let piece = g.mul_monomial(&t).scaled(&f);
            q.add_term(t, f);
            rem = &rem - &piece;
        }
        Some(q)
    }

    /// Same contract as `exact_divide`, by a different route: univariate
    /// division in the last variable present in `g`, recursing into the
    /// coefficient ring. Kept as an independent strategy; the two are
    /// cross-checked in the test suites.
    pub fn exact_divide_recursive(&self, g: &Poly<F>) -> Option<Poly<F>> {
        self.compat(g).ok()?;
        if g.is_zero() {
            return None;
        }
        // Last table variable occurring in g.
        let v = (0..self.table.len() as u32)
            .rev()
            .map(Var)
            .find(|v| g.degree_in(*v) > 0);
        let v = match v {
            None => {
                // g is a nonzero constant.
                let c = g.terms.values().next().unwrap();
                let inv = self.field.inv(c).unwrap();
                return Some(self.scaled(&inv));
            }
            Some(v) => v,
        };
        let fparts = self.coefficients_in(v);
        let gparts = g.coefficients_in(v);
        let d = (gparts.len() - 1) as u16;
        let lead = &gparts[d as usize];
        let mut rem_parts = fparts;
        let mut qparts: BTreeMap<u16, Poly<F>> = BTreeMap::new();
        loop {
            while rem_parts.last().map(|p| p.is_zero()).unwrap_or(false) {
                rem_parts.pop();
            }
            if rem_parts.is_empty() {
                break;
            }
            let n = (rem_parts.len() - 1) as u16;
            if n < d {
                return None;
            }
            let top = rem_parts.last().unwrap();
            let qc = top.exact_divide_recursive(lead)?;
            // rem -= qc * v^(n-d) * g
            for (j, gp) in gparts.iter().enumerate() {
                let idx = (n - d) as usize + j;
                let delta = &qc * gp;
                rem_parts[idx] = &rem_parts[idx] - &delta;
            }
            qparts.insert(n - d, qc);
        }
        let vmono = |e: u16| Monomial::var(&self.table, v, e);
        let mut q = Poly::zero(self.field.clone(), self.table.clone());
        for (e, part) in qparts {
            q = &q + &part.mul_monomial(&vmono(e));
        }
        Some(q)
    }

    /// Splits into coefficient polynomials of powers of `v`; index = power.
    pub fn coefficients_in(&self, v: Var) -> Vec<Poly<F>> {
        let d = self.degree_in(v) as usize;
        let mut parts =
            vec![Poly::zero(self.field.clone(), self.table.clone()); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(&self.table, v);
            let mut m2 = m.clone();
            m2.set(&self.table, v, 0);
            parts[e as usize].add_term(m2, c.clone());
        }
        parts
    }

    /// None unless the polynomial is a nonzero constant.
    pub fn as_constant(&self) -> Option<F::Elem> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    /// Rescales so the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Poly<F> {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).unwrap();
                self.scaled(&inv)
            }
        }
    }

    /// `Some(c)` with `self == other * c`, `c` nonzero. Zero polynomials
    /// only match each other (with c = 1).
    pub fn unit_multiple_of(&self, other: &Poly<F>) -> Option<F::Elem> {
        if self.compat(other).is_err() {
            return None;
        }
        if self.is_zero() && other.is_zero() {
            return Some(self.field.one());
        }
        if self.is_zero() != other.is_zero() || self.terms.len() != other.terms.len() {
            return None;
        }
        let (m0, c0) = self.leading().unwrap();
        let (m1, c1) = other.leading().unwrap();
        if m0 != m1 {
            return None;
        }
        let c = self.field.div(c0, c1)?;
        if *self == other.scaled(&c) {
            Some(c)
        } else {
            None
        }
    }
}

impl<F: Field> std::ops::Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        self.checked_add(rhs).expect("polynomial addition: incompatible operands")
    }
}

impl<F: Field> std::ops::Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        self.checked_sub(rhs).expect("polynomial subtraction: incompatible operands")
    }
}

impl<F: Field> std::ops::Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        self.checked_mul(rhs).expect("polynomial multiplication: incompatible operands")
    }
}

impl<F: Field> std::ops::Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        self.negated()
    }
}

/// All monomials of the given bidegree, in descending block order. The
/// count is C(a+m-1, m-1) * C(b+n-1, n-1) for block sizes m and n.
pub fn monomial_basis(table: &Arc<VarTable>, bid: Bidegree) -> Vec<Monomial> {
    let mut mus: Vec<Vec<u16>> = Vec::new();
    compositions(bid.mu as u16, table.mu_len(), &mut Vec::new(), &mut mus);
    let mut xs: Vec<Vec<u16>> = Vec::new();
    compositions(bid.x as u16, table.x_len(), &mut Vec::new(), &mut xs);
    let mut out = Vec::with_capacity(mus.len() * xs.len());
    for mu in &mus {
        for x in &xs {
            out.push(Monomial::from_exponents(mu, x));
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn compositions(total: u16, parts: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
    if parts == 0 {
        if total == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if cur.len() == parts - 1 {
        cur.push(total);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for e in 0..=total {
        cur.push(e);
        compositions(total - e, parts, cur, out);
        cur.pop();
    }
}

/// Reduce a rational polynomial mod p. Fails if some denominator is
/// divisible by p; reports when the whole polynomial vanishes mod p even
/// though it was nonzero, which callers treat as a bad prime.
pub fn reduce_mod_p(poly: &Poly<Rationals>, fp: Fp) -> Result<Poly<Fp>, PolyError> {
    let p = fp.modulus();
    let mut out = Poly::zero(fp, poly.table().clone());
    for (m, c) in poly.iter() {
        let den = c.denom();
        let den_red = fp.from_bigint(den);
        if den_red == 0 {
            return Err(PolyError::BadPrime {
                p,
                detail: format!("denominator {den} vanishes"),
            });
        }
        let num_red = fp.from_bigint(c.numer());
        let inv = fp.inv(&den_red).unwrap();
        out.add_term(m.clone(), fp.mul(&num_red, &inv));
    }
    Ok(out)
}

impl fmt::Display for Poly<Rationals> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_poly(f, self, |c| (c.is_negative(), rational_abs_string(c)))
    }
}

impl fmt::Display for Poly<Fp> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_poly(f, self, |c| (false, c.to_string()))
    }
}

fn rational_abs_string(c: &num_rational::BigRational) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

fn format_poly<F: Field>(
    f: &mut fmt::Formatter<'_>,
    p: &Poly<F>,
    classify: impl Fn(&F::Elem) -> (bool, String),
) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (m, c) in p.iter().collect::<Vec<_>>().into_iter().rev() {
        let (neg, abs) = classify(c);
        if first {
            if neg {
                write!(f, "-")?;
            }
            first = false;
        } else if neg {
            write!(f, "-")?;
        } else {
            write!(f, "+")?;
        }
        let mut factors: Vec<String> = Vec::new();
        for v in m.support() {
            let e = m.exp(p.table(), v);
            let name = p.table().name(v);
            if e == 1 {
                factors.push(name.to_string());
            } else {
                factors.push(format!("{name}^{e}"));
            }
        }
        if factors.is_empty() {
            write!(f, "{abs}")?;
        } else if abs == "1" {
            write!(f, "{}", factors.join("*"))?;
        } else {
            write!(f, "{}*{}", abs, factors.join("*"))?;
        }
    }
    Ok(())
}

impl<F: Field> fmt::Debug for Poly<F>
where
    Poly<F>: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::vars::VarTable;

    fn table() -> Arc<VarTable> {
        VarTable::new(&["m0", "m1", "m2"], &["x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7"])
    }

    fn q(src: &str) -> Poly<Rationals> {
        parse_poly(src, Rationals, &table()).unwrap()
    }

    #[test]
    fn arithmetic_and_canonical_form() {
        let a = q("x0^2 + 2*x0*x1");
        let b = q("-x0^2 + x1");
        let s = &a + &b;
        assert_eq!(s, q("2*x0*x1 + x1"));
        let z = &a - &a;
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn product_example() {
        // (g1+g2)^2*(g1+2*g2) expands with untruncated coefficients 1,4,5,2.
        let t = VarTable::new::<&str>(&[], &["g1", "g2"]);
        let g1 = parse_poly("g1", Rationals, &t).unwrap();
        let g2 = parse_poly("g2", Rationals, &t).unwrap();
        let s = &g1 + &g2;
        let prod = &(&s * &s) * &(&g1 + &g2.scaled(&Rationals.from_int(2)));
        let expect = parse_poly("g1^3 + 4*g1^2*g2 + 5*g1*g2^2 + 2*g2^3", Rationals, &t).unwrap();
        assert_eq!(prod, expect);
    }

    #[test]
    fn derivative_of_quadric() {
        let p = q("-x0*x5 + x3^2 + x4*x6 - 2*x5^2");
        let t = table();
        let d = p.derivative(t.var("x5").unwrap());
        assert_eq!(d, q("-x0 - 4*x5"));
        let d3 = p.derivative(t.var("x3").unwrap());
        assert_eq!(d3, q("2*x3"));
        let d7 = p.derivative(t.var("x7").unwrap());
        assert!(d7.is_zero());
    }

    #[test]
    fn homogeneity_classification() {
        assert_eq!(q("0").homogeneity(), Homogeneity::Zero);
        assert_eq!(
            q("m0*x0*x1 - 3*m1*x2^2").homogeneity(),
            Homogeneity::Bihomogeneous(Bidegree::new(1, 2))
        );
        assert_eq!(q("m0*x0 + x1").homogeneity(), Homogeneity::Mixed);
    }

    #[test]
    fn monomial_basis_counts() {
        let t = table();
        assert_eq!(monomial_basis(&t, Bidegree::new(1, 0)).len(), 3);
        assert_eq!(monomial_basis(&t, Bidegree::new(1, 2)).len(), 108);
        assert_eq!(monomial_basis(&t, Bidegree::new(3, 4)).len(), 3300);
        // Descending block order.
        let basis = monomial_basis(&t, Bidegree::new(0, 2));
        assert_eq!(basis.len(), 36);
        for w in basis.windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn exact_division_both_strategies() {
        let f = q("x0^2*x1 + x0*x1^2 - x0*x1");
        let g = q("x0*x1");
        let want = q("x0 + x1 - 1");
        assert_eq!(f.exact_divide(&g).unwrap(), want);
        assert_eq!(f.exact_divide_recursive(&g).unwrap(), want);

        let bad = q("x0^2 + x1");
        assert!(bad.exact_divide(&g).is_none());
        assert!(bad.exact_divide_recursive(&g).is_none());
    }

    #[test]
    fn division_with_rational_quotient() {
        let f = q("3*x0^2");
        let g = q("2*x0");
        let quotient = f.exact_divide(&g).unwrap();
        assert_eq!(&quotient * &g, f);
        assert_eq!(quotient, f.exact_divide_recursive(&g).unwrap());
    }

    #[test]
    fn substitution_is_evaluation() {
        let t = table();
        let p = q("x0^2 - x1*x2");
        let mut assign = BTreeMap::new();
        assign.insert(t.var("x0").unwrap(), q("x1 + x2"));
        let r = p.substitute(&assign);
        assert_eq!(r, q("x1^2 + 2*x1*x2 + x2^2 - x1*x2"));
    }

    #[test]
    fn map_into_other_table() {
        let small = VarTable::new(&["m0"], &["x0", "x1"]);
        let p = parse_poly("m0*x0 - x1^2", Rationals, &small).unwrap();
        let big = table();
        let r = p.rename_into(&big).unwrap();
        assert_eq!(r, q("m0*x0 - x1^2"));
        let missing = VarTable::new(&["m9"], &["x0", "x1"]);
        let p2 = parse_poly("m9*x0", Rationals, &missing).unwrap();
        assert!(matches!(p2.rename_into(&big), Err(PolyError::UnknownVariable(_))));
    }

    #[test]
    fn mod_p_reduction() {
        let f7 = Fp::new(7);
        let p = q("1/2*x0 + 14*x1 + 3");
        let r = reduce_mod_p(&p, f7).unwrap();
        // 1/2 = 4 mod 7, 14 = 0 mod 7.
        let expect = parse_poly("4*x0 + 3", f7, &table()).unwrap();
        assert_eq!(r, expect);

        let seventh = q("1/7*x0");
        assert!(reduce_mod_p(&seventh, f7).is_err());
    }

    #[test]
    fn unit_multiple_detection() {
        let a = q("2*x0 - 4*x1");
        let b = q("-x0 + 2*x1");
        assert_eq!(a.unit_multiple_of(&b), Some(Rationals.from_int(-2)));
        assert_eq!(a.unit_multiple_of(&q("x0 + x1")), None);
    }

    #[test]
    fn checked_ops_catch_mismatches() {
        let t1 = table();
        let t2 = VarTable::new(&["m0"], &["x0"]);
        let a = parse_poly("x0", Rationals, &t1).unwrap();
        let b = parse_poly("x0", Rationals, &t2).unwrap();
        assert_eq!(a.checked_add(&b), Err(PolyError::TableMismatch));
    }
}
