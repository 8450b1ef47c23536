//! Groebner bases for the block order, ideal membership, projective
//! emptiness, and smoothness certificates for complete intersections of
//! quadrics.
//!
//! The engine is Buchberger's algorithm with the normal selection strategy
//! and the two classical pair-elimination criteria. Output bases are
//! reduced and monic, so each ideal has exactly one basis and runs are
//! reproducible.

use std::fmt;
use std::sync::Arc;

use crate::field::{Field, Fp, Rationals};
use crate::monomial::Monomial;
use crate::poly::{reduce_mod_p, Poly, PolyError};
use crate::vars::VarTable;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroebnerError {
    EmptyTable,
    Inconclusive { variable: String, bound: u32 },
    Input(PolyError),
}

impl fmt::Display for GroebnerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroebnerError::EmptyTable => write!(f, "no variables to work with"),
            GroebnerError::Inconclusive { variable, bound } => write!(
                f,
                "no power of {variable} up to {bound} reduced to zero, \
                 and the leading ideal does not rule one out"
            ),
            GroebnerError::Input(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for GroebnerError {}

impl From<PolyError> for GroebnerError {
    fn from(e: PolyError) -> GroebnerError {
        GroebnerError::Input(e)
    }
}

/// Full reduction of `f` by a list of nonzero monic polynomials: no term
/// of the result is divisible by any leading monomial of `basis`.
pub fn normal_form<F: Field>(f: &Poly<F>, basis: &[Poly<F>]) -> Poly<F> {
    let field = f.field().clone();
    let table = f.table().clone();
    let leads: Vec<&Monomial> = basis.iter().map(|g| g.leading().unwrap().0).collect();
    let mut work = f.clone();
    let mut rem = Poly::zero(field.clone(), table.clone());
    'outer: while let Some((m, c)) = work.leading() {
        for (g, gm) in basis.iter().zip(&leads) {
            if let Some(t) = gm.divide_into(m) {
                let piece = g.mul_monomial(&t).scaled(c);
                work = &work - &piece;
                continue 'outer;
            }
        }
        let term = Poly::from_terms(field.clone(), table.clone(), [(m.clone(), c.clone())]);
        rem = &rem + &term;
        work = &work - &term;
    }
    rem
}

fn s_poly<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
    let (fm, _) = f.leading().unwrap();
    let (gm, _) = g.leading().unwrap();
    let l = fm.lcm(gm);
    let tf = fm.divide_into(&l).unwrap();
    let tg = gm.divide_into(&l).unwrap();
    &f.mul_monomial(&tf) - &g.mul_monomial(&tg)
}

/// Buchberger with normal selection (smallest lcm degree first, ties split
/// by the lcm itself and then by index) plus the coprimality and chain
/// criteria. Input order does not affect the result: the basis is
/// interreduced at the end and sorted by leading monomial.
pub fn groebner_basis<F: Field>(gens: &[Poly<F>]) -> Vec<Poly<F>> {
    let mut g: Vec<Poly<F>> = gens.iter().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
    if g.is_empty() {
        return g;
    }

    // Pending pairs, keyed for the selection strategy.
    let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();
    let lead = |g: &[Poly<F>], i: usize| g[i].leading().unwrap().0.clone();
    for i in 0..g.len() {
        for j in 0..i {
            pairs.push((j, i, lead(&g, j).lcm(&lead(&g, i))));
        }
    }

    while !pairs.is_empty() {
        let mut best = 0;
        for k in 1..pairs.len() {
            let (ai, aj, am) = &pairs[best];
            let (bi, bj, bm) = &pairs[k];
            let ord = bm
                .total_degree()
                .cmp(&am.total_degree())
                .then_with(|| bm.cmp(am))
                .then_with(|| (bi, bj).cmp(&(ai, aj)));
            if ord == std::cmp::Ordering::Less {
                best = k;
            }
        }
        let (i, j, l) = pairs.swap_remove(best);

        let li = g[i].leading().unwrap().0;
        let lj = g[j].leading().unwrap().0;
        if li.is_coprime(lj) {
            continue;
        }
        // Chain criterion: some other leading monomial divides the lcm and
        // both side pairs are no longer pending.
        let chained = (0..g.len()).any(|k| {
            k != i
                && k != j
                && g[k].leading().unwrap().0.divides(&l)
                && !pairs.iter().any(|(a, b, _)| {
                    (*a, *b) == (i.min(k), i.max(k)) || (*a, *b) == (j.min(k), j.max(k))
                })
        });
        if chained {
            continue;
        }

        let s = s_poly(&g[i], &g[j]);
        let r = normal_form(&s, &g);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        let rl = r.leading().unwrap().0.clone();
        let new_idx = g.len();
        for k in 0..new_idx {
            pairs.push((k, new_idx, lead(&g, k).lcm(&rl)));
        }
        g.push(r);
    }

    reduce_basis(g)
}

fn reduce_basis<F: Field>(mut g: Vec<Poly<F>>) -> Vec<Poly<F>> {
    // Minimal: drop any element whose leading monomial another one divides.
    let mut keep: Vec<bool> = vec![true; g.len()];
    for i in 0..g.len() {
        if !keep[i] {
            continue;
        }
        let li = g[i].leading().unwrap().0.clone();
        for j in 0..g.len() {
            if i == j || !keep[j] {
                continue;
            }
            let lj = g[j].leading().unwrap().0;
            if lj.divides(&li) && (lj != &li || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<Poly<F>> =
        g.drain(..).zip(keep).filter_map(|(p, k)| k.then_some(p)).collect();

    // Reduced: each element in normal form with respect to the others.
    for i in 0..minimal.len() {
        let me = minimal[i].clone();
        let others: Vec<Poly<F>> = minimal
            .iter()
            .enumerate()
            .filter_map(|(j, p)| (j != i).then(|| p.clone()))
            .collect();
        minimal[i] = normal_form(&me, &others).monic();
    }
    minimal.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    minimal
}

/// Re-derivation check: every S-polynomial of the basis reduces to zero.
/// Quadratic in the basis size; meant for test and audit paths.
pub fn confirm_spairs_vanish<F: Field>(basis: &[Poly<F>]) -> bool {
    for i in 0..basis.len() {
        for j in 0..i {
            let s = s_poly(&basis[i], &basis[j]);
            if !normal_form(&s, basis).is_zero() {
                return false;
            }
        }
    }
    true
}

pub fn ideal_member<F: Field>(f: &Poly<F>, basis: &[Poly<F>]) -> bool {
    normal_form(f, basis).is_zero()
}

/// Decides whether the projective vanishing locus of the ideal is empty,
/// i.e. whether every variable of the table has some power in the ideal.
///
/// For each variable, powers up to `bound` are reduced against the basis.
/// When that fails for a variable `v`, the leading ideal settles the
/// question negatively: a power of `v` in the ideal forces a pure power of
/// `v` among the leading monomials. If such a leading monomial exists but
/// no power up to `bound` reduced to zero, the outcome is inconclusive and
/// a larger bound may decide it.
pub fn projective_empty<F: Field>(
    basis: &[Poly<F>],
    field: F,
    table: &Arc<VarTable>,
    bound: u32,
) -> Result<bool, GroebnerError> {
    if table.is_empty() {
        return Err(GroebnerError::EmptyTable);
    }
    for v in table.vars() {
        let gen = Poly::variable(field.clone(), table.clone(), v);
        let mut power = gen.clone();
        let mut found = false;
        for _ in 1..=bound {
            if normal_form(&power, basis).is_zero() {
                found = true;
                break;
            }
            power = &power * &gen;
        }
        if found {
            continue;
        }
        let has_pure_power = basis.iter().any(|g| {
            let lm = g.leading().unwrap().0;
            !lm.is_one() && lm.support().all(|w| w == v)
        });
        if has_pure_power {
            return Err(GroebnerError::Inconclusive {
                variable: table.name(v).to_string(),
                bound,
            });
        }
        return Ok(false);
    }
    Ok(true)
}

/// All k-by-k minors of a matrix of polynomials, by cofactor expansion.
pub fn minors<F: Field>(mat: &[Vec<Poly<F>>], k: usize) -> Vec<Poly<F>> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut row_sets = Vec::new();
    choose(rows, k, &mut Vec::new(), &mut row_sets);
    let mut col_sets = Vec::new();
    choose(cols, k, &mut Vec::new(), &mut col_sets);
    let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
    for rs in &row_sets {
        for cs in &col_sets {
            out.push(poly_det(mat, rs, cs));
        }
    }
    out
}

fn choose(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    let start = cur.last().map(|&x| x + 1).unwrap_or(0);
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        choose(n, k, cur, out);
        cur.pop();
    }
}

fn poly_det<F: Field>(mat: &[Vec<Poly<F>>], rows: &[usize], cols: &[usize]) -> Poly<F> {
    let k = rows.len();
    if k == 1 {
        return mat[rows[0]][cols[0]].clone();
    }
    let sample = &mat[rows[0]][cols[0]];
    let mut acc = Poly::zero(sample.field().clone(), sample.table().clone());
    for (t, &r) in rows.iter().enumerate() {
        let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
        let term = &mat[r][cols[0]] * &poly_det(mat, &sub_rows, &cols[1..]);
        if t % 2 == 0 {
            acc = &acc + &term;
        } else {
            acc = &acc - &term;
        }
    }
    acc
}

/// Ideal cutting out the non-smooth points of a complete intersection of
/// quadrics: the quadrics themselves plus the maximal minors of their
/// Jacobian matrix.
pub fn singular_locus_generators<F: Field>(quadrics: &[Poly<F>]) -> Vec<Poly<F>> {
    assert!(!quadrics.is_empty());
    let table = quadrics[0].table().clone();
    let jac: Vec<Vec<Poly<F>>> = quadrics
        .iter()
        .map(|q| table.vars().map(|v| q.derivative(v)).collect())
        .collect();
    let mut gens = quadrics.to_vec();
    gens.extend(minors(&jac, quadrics.len()));
    gens
}

pub const SMOOTHNESS_PRIMES: [u64; 3] = [101, 32003, 65537];
pub const POWER_BOUND: u32 = 32;

#[derive(Clone, Debug)]
pub enum PrimeOutcome {
    /// Singular locus empty over this prime field: certifies smoothness
    /// over the rationals.
    Empty,
    /// Singular locus provably nonempty over this prime field. Says
    /// nothing about the rationals on its own.
    NonEmpty,
    /// A defining quadric vanished after reduction; prime unusable.
    BadReduction(String),
    Inconclusive(String),
}

#[derive(Clone, Debug)]
pub struct SmoothnessReport {
    pub attempts: Vec<(u64, PrimeOutcome)>,
}

impl SmoothnessReport {
    pub fn certified_prime(&self) -> Option<u64> {
        self.attempts.iter().find_map(|(p, o)| matches!(o, PrimeOutcome::Empty).then_some(*p))
    }
}

/// Smoothness certificate for a complete intersection of quadrics in the
/// projective space on the x variables.
///
/// If the singular locus is empty after reduction modulo a prime p that
/// does not kill any defining quadric, it is empty in characteristic zero
/// as well: a rational singular point would reduce to one modulo p. Primes
/// are tried in order; a prime where the reduced singular locus is
/// nonempty proves nothing about the rationals (the prime may simply be
/// bad for this intersection), so the next one is tried.
pub fn certify_smooth(
    quadrics: &[Poly<Rationals>],
    primes: &[u64],
    bound: u32,
) -> Result<SmoothnessReport, GroebnerError> {
    assert!(!quadrics.is_empty());
    let src = quadrics[0].table().clone();
    let xtable = VarTable::new::<String>(&[], src.x_names());
    let qs: Vec<Poly<Rationals>> = quadrics
        .iter()
        .map(|q| q.rename_into(&xtable))
        .collect::<Result<_, _>>()?;

    let mut attempts = Vec::new();
    for &p in primes {
        let fp = Fp::new(p);
        let mut reduced = Vec::with_capacity(qs.len());
        let mut bad = None;
        for q in &qs {
            match reduce_mod_p(q, fp) {
                Ok(r) if r.is_zero() && !q.is_zero() => {
                    bad = Some(format!("a quadric vanishes mod {p}"));
                    break;
                }
                Ok(r) => reduced.push(r),
                Err(e) => {
                    bad = Some(e.to_string());
                    break;
                }
            }
        }
        if let Some(msg) = bad {
            attempts.push((p, PrimeOutcome::BadReduction(msg)));
            continue;
        }
        let gens = singular_locus_generators(&reduced);
        let gb = groebner_basis(&gens);
        match projective_empty(&gb, fp, &xtable, bound) {
            Ok(true) => {
                attempts.push((p, PrimeOutcome::Empty));
                return Ok(SmoothnessReport { attempts });
            }
            Ok(false) => attempts.push((p, PrimeOutcome::NonEmpty)),
            Err(e) => attempts.push((p, PrimeOutcome::Inconclusive(e.to_string()))),
        }
    }
    Ok(SmoothnessReport { attempts })
}
