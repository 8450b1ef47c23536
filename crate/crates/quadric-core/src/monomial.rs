//! Monomials as split exponent vectors with a block order: graded reverse
//! lexicographic inside each block, mu-block compared first. This order is
//! the storage order of every polynomial, so canonical forms are unique.

use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::vars::{Bidegree, Block, Var, VarTable};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    mu: SmallVec<[u16; 4]>,
    x: SmallVec<[u16; 8]>,
}

impl Monomial {
    pub fn one(table: &VarTable) -> Monomial {
        Monomial {
            mu: SmallVec::from_elem(0, table.mu_len()),
            x: SmallVec::from_elem(0, table.x_len()),
        }
    }

    pub fn var(table: &VarTable, v: Var, e: u16) -> Monomial {
        let mut m = Monomial::one(table);
        m.set(table, v, e);
        m
    }

    pub fn from_exponents(mu: &[u16], x: &[u16]) -> Monomial {
        Monomial { mu: SmallVec::from_slice(mu), x: SmallVec::from_slice(x) }
    }

    pub fn exp(&self, table: &VarTable, v: Var) -> u16 {
        match table.block(v) {
            Block::Mu => self.mu[v.0 as usize],
            Block::X => self.x[v.0 as usize - table.mu_len()],
        }
    }

    pub fn set(&mut self, table: &VarTable, v: Var, e: u16) {
        match table.block(v) {
            Block::Mu => self.mu[v.0 as usize] = e,
            Block::X => self.x[v.0 as usize - table.mu_len()] = e,
        }
    }

    pub fn mu_exponents(&self) -> &[u16] {
        &self.mu
    }
    pub fn x_exponents(&self) -> &[u16] {
        &self.x
    }

    pub fn mu_degree(&self) -> u32 {
        self.mu.iter().map(|&e| e as u32).sum()
    }
    pub fn x_degree(&self) -> u32 {
        self.x.iter().map(|&e| e as u32).sum()
    }
    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.mu_degree(), self.x_degree())
    }
    pub fn total_degree(&self) -> u32 {
        self.mu_degree() + self.x_degree()
    }
    pub fn is_one(&self) -> bool {
        self.mu.iter().all(|&e| e == 0) && self.x.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.mu.len(), other.mu.len());
        debug_assert_eq!(self.x.len(), other.x.len());
        let mu = self
            .mu
            .iter()
            .zip(&other.mu)
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        let x = self
            .x
            .iter()
            .zip(&other.x)
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Monomial { mu, x }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.mu.iter().zip(&other.mu).all(|(a, b)| a <= b)
            && self.x.iter().zip(&other.x).all(|(a, b)| a <= b)
    }

    /// other / self, when self divides other.
    pub fn divide_into(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mu = self.mu.iter().zip(&other.mu).map(|(a, b)| b - a).collect();
        let x = self.x.iter().zip(&other.x).map(|(a, b)| b - a).collect();
        Some(Monomial { mu, x })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mu = self.mu.iter().zip(&other.mu).map(|(a, b)| *a.max(b)).collect();
        let x = self.x.iter().zip(&other.x).map(|(a, b)| *a.max(b)).collect();
        Monomial { mu, x }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mu = self.mu.iter().zip(&other.mu).map(|(a, b)| *a.min(b)).collect();
        let x = self.x.iter().zip(&other.x).map(|(a, b)| *a.min(b)).collect();
        Monomial { mu, x }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.mu.iter().zip(&other.mu).all(|(a, b)| *a == 0 || *b == 0)
            && self.x.iter().zip(&other.x).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Support as variable indices, mu-block first.
    pub fn support(&self) -> impl Iterator<Item = Var> + '_ {
        let mu_len = self.mu.len() as u32;
        let mus = self.mu.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| Var(i as u32));
        let xs = self
            .x
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(move |(i, _)| Var(mu_len + i as u32));
        mus.chain(xs)
    }
}

fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // Same degree: the last nonzero entry of a - b decides; negative wins.
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
            Ordering::Equal => {}
        }
    }
    Ordering::Equal
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grevlex(&self.mu, &other.mu).then_with(|| grevlex(&self.x, &other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Plain lexicographic comparison over the concatenated exponent vector.
/// Used only to demonstrate that ranks of graded pieces do not depend on
/// the column order.
pub fn lex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    for (ea, eb) in a.mu.iter().chain(a.x.iter()).zip(b.mu.iter().chain(b.x.iter())) {
        match ea.cmp(eb) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    Ordering::Equal
}
