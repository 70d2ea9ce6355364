//! MAX-SAT instances, clause Walsh coefficients, and the closed-form
//! elementary decomposition of the falsified-clause count and its powers.
//!
//! A clause is encoded by two masks: `v` marks the variables that appear
//! at all, `u` the ones that appear negated (`u & v == u`). The
//! tautological clause gets a separate flag since the masks cannot
//! express it; the empty clause is `v = u = 0`. Working with
//! `g_c = 1 - f_c` (1 iff the clause is falsified) keeps the algebra
//! tight: `g_c` has a one-line Walsh expansion supported on `w` inside
//! `v`, products of clause indicators are again clause indicators (of the
//! disjunction), and powers of `g = sum_c g_c` expand over clause subsets
//! with surjection-counting coefficients.

use crate::bitspace::BitString;
use crate::error::{Error, Result};
use crate::krawtchouk::{binomial, KrawtchoukCache};
use crate::mutation::{FMatrix, FSource, FitnessLevels};
use crate::scalar::Scalar;
use crate::walsh::{walsh_eval, FunctionTable};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::io::BufRead;

/// One clause over n variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    /// Variables present, negated or not.
    v: BitString,
    /// Variables present negated; always a subset of `v`.
    u: BitString,
    /// The tautological clause (contains some x and not-x).
    is_top: bool,
}

impl Clause {
    /// The empty clause over n variables (never satisfied).
    pub fn empty(n: usize) -> Self {
        Clause { v: BitString::zeros(n), u: BitString::zeros(n), is_top: false }
    }

    /// The tautological clause over n variables (always satisfied).
    pub fn top(n: usize) -> Self {
        Clause { v: BitString::zeros(n), u: BitString::zeros(n), is_top: true }
    }

    /// Build from DIMACS-style literals: `k` is variable k (1-indexed),
    /// `-k` its negation. Duplicates collapse; complementary literals
    /// make the clause tautological.
    pub fn from_literals(n: usize, literals: &[i32]) -> Result<Self> {
        let mut c = Clause::empty(n);
        for &lit in literals {
            if lit == 0 {
                return Err(Error::Parse("literal 0 inside a clause".into()));
            }
            let var = lit.unsigned_abs() as usize;
            if var > n {
                return Err(Error::Parse(format!(
                    "variable {var} out of range 1..={n}"
                )));
            }
            let pos = var - 1;
            let negated = lit < 0;
            if c.v.get(pos) && c.u.get(pos) != negated {
                return Ok(Clause::top(n));
            }
            c.v.set(pos, true);
            c.u.set(pos, negated);
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn is_top(&self) -> bool {
        self.is_top
    }

    /// The presence mask; meaningless for the tautological clause.
    pub fn v(&self) -> &BitString {
        &self.v
    }

    /// The negation mask; always a submask of `v`.
    pub fn u(&self) -> &BitString {
        &self.u
    }

    /// Number of literals.
    pub fn width(&self) -> usize {
        if self.is_top {
            0
        } else {
            self.v.popcount()
        }
    }

    /// True when assignment `x` satisfies the clause.
    pub fn satisfied_by(&self, x: &BitString) -> bool {
        if self.is_top {
            return true;
        }
        // some positive literal is true, or some negated variable is false
        let positive = &self.v & &self.u.complement();
        !(x & &positive).is_zero() || !(&x.complement() & &self.u).is_zero()
    }
}

/// Which clause indicator a Walsh coefficient refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClauseFn {
    /// `f_c`: 1 iff the clause is satisfied.
    Satisfied,
    /// `g_c = 1 - f_c`: 1 iff the clause is falsified.
    Falsified,
}

/// An ordered MAX-SAT instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseSet {
    n: usize,
    clauses: Vec<Clause>,
}

impl ClauseSet {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        for c in &clauses {
            if c.n() != n {
                return Err(Error::LengthMismatch { expected: n, got: c.n() });
            }
        }
        Ok(ClauseSet { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Number of clauses falsified by `x` (the function g).
    pub fn falsified_count(&self, x: &BitString) -> usize {
        self.clauses.iter().filter(|c| !c.satisfied_by(x)).count()
    }

    /// Number of clauses satisfied by `x` (the MAX-SAT objective f).
    pub fn satisfied_count(&self, x: &BitString) -> usize {
        self.len() - self.falsified_count(x)
    }

    /// Tabulate g over the whole hypercube (enumerative sizes apply).
    pub fn g_table<S: Scalar>(&self) -> Result<FunctionTable<S>> {
        FunctionTable::from_fn(self.n, |x| S::from_int(self.falsified_count(x) as i64))
    }

    /// The default level set for g: the integers `0..=|C|`, without
    /// claiming they are all attained.
    pub fn default_g_levels<S: Scalar>(&self) -> FitnessLevels<S> {
        FitnessLevels::new((0..=self.len()).map(|v| S::from_int(v as i64)).collect())
            .expect("integer ladder is strictly increasing")
    }

    /// The exact attained level set of g with level sizes, by full
    /// enumeration (n is limited accordingly).
    pub fn attained_g_levels<S: Scalar>(&self) -> Result<FitnessLevels<S>> {
        Ok(FitnessLevels::from_table(&self.g_table::<S>()?))
    }
}

/// Outcome of parsing a DIMACS CNF stream: the instance plus non-fatal
/// diagnostics (clause count mismatches and the like).
#[derive(Clone, Debug)]
pub struct DimacsInstance {
    pub clauses: ClauseSet,
    pub warnings: Vec<String>,
}

/// Parse DIMACS CNF: `c` comment lines, one `p cnf <vars> <clauses>`
/// header, then clauses as signed integers each terminated by 0 (line
/// breaks are not significant). A `%` token ends the input, matching the
/// SATLIB convention. A declared clause count that disagrees with the
/// body is a warning, not an error.
pub fn parse_dimacs<R: BufRead>(input: R) -> Result<DimacsInstance> {
    let mut n: Option<usize> = None;
    let mut declared: Option<usize> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<i32> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    'lines: for line in input.lines() {
        let line = line.map_err(|e| Error::Parse(format!("read failure: {e}")))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('p') {
            if n.is_some() {
                return Err(Error::Parse("duplicate problem line".into()));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "cnf" {
                return Err(Error::Parse(format!("malformed problem line {trimmed:?}")));
            }
            let vars: usize = fields[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable count {:?}", fields[1])))?;
            let count: usize = fields[2]
                .parse()
                .map_err(|_| Error::Parse(format!("bad clause count {:?}", fields[2])))?;
            n = Some(vars);
            declared = Some(count);
            continue;
        }
        let n = n.ok_or_else(|| Error::Parse("clause before problem line".into()))?;
        for tok in trimmed.split_whitespace() {
            if tok == "%" {
                break 'lines;
            }
            let lit: i32 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(Clause::from_literals(n, &pending)?);
                pending.clear();
            } else {
                pending.push(lit);
            }
        }
    }
    let n = n.ok_or_else(|| Error::Parse("missing problem line".into()))?;
    if !pending.is_empty() {
        warnings.push("last clause missing its terminating 0".into());
        clauses.push(Clause::from_literals(n, &pending)?);
    }
    if let Some(declared) = declared {
        if declared != clauses.len() {
            warnings.push(format!(
                "header declares {declared} clauses, found {}",
                clauses.len()
            ));
        }
    }
    Ok(DimacsInstance { clauses: ClauseSet::new(n, clauses)?, warnings })
}

/// Walsh coefficient of a single-clause indicator at parameter `w`.
///
/// For the falsified indicator the expansion is supported on submasks of
/// `v`: the coefficient is `2^{-|v|} psi_w(u)` there and 0 elsewhere (and
/// 0 everywhere for the tautology). The satisfied indicator is its
/// complement, so only the constant coefficient differs in more than
/// sign.
pub fn clause_walsh_coeff<S: Scalar>(c: &Clause, w: &BitString, which: ClauseFn) -> Result<S> {
    if w.len() != c.n() {
        return Err(Error::LengthMismatch { expected: c.n(), got: w.len() });
    }
    if c.is_top() {
        return Ok(match which {
            ClauseFn::Satisfied if w.is_zero() => S::one(),
            _ => S::zero(),
        });
    }
    if !(w & &c.v().complement()).is_zero() {
        return Ok(S::zero());
    }
    let den = BigInt::one() << c.width();
    let base = S::from_big_ratio(&BigInt::one(), &den);
    if w.is_zero() {
        return Ok(match which {
            ClauseFn::Satisfied => S::one() - base,
            ClauseFn::Falsified => base,
        });
    }
    let sign = walsh_eval(w, c.u())?;
    let signed = if sign >= 0 { base } else { -base };
    Ok(match which {
        ClauseFn::Satisfied => -signed,
        ClauseFn::Falsified => signed,
    })
}

/// Order-j elementary component of the falsified indicator `g_c` at `x`:
/// `2^{-|v|} K^(|v|)_{j, d}` with `d = |(x xor u) & v|`, zero for the
/// tautology and for `j > |v|`.
pub fn clause_elementary<S: Scalar>(c: &Clause, j: usize, x: &BitString) -> Result<S> {
    if x.len() != c.n() {
        return Err(Error::LengthMismatch { expected: c.n(), got: x.len() });
    }
    if j > c.n() {
        return Err(Error::IndexOutOfRange { what: "order", index: j, max: c.n() });
    }
    if c.is_top() {
        return Ok(S::zero());
    }
    let s = c.width();
    if j > s {
        return Ok(S::zero());
    }
    let d = (&(x ^ c.u()) & c.v()).popcount();
    let k = crate::krawtchouk::KrawtchoukMatrix::build(s);
    let den = BigInt::one() << s;
    Ok(S::from_big_ratio(k.at(j, d), &den))
}

/// Surjection-counting coefficients: entry (m, k) is the number of ways
/// to write an ordered m-sequence covering all of k labels, i.e. the
/// number of surjections from an m-set onto a k-set. Computed by the
/// recurrence `k^m = sum_l C(k, l) Upsilon_{m,l}` solved for the top
/// term; all entries are exact integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpsilonMatrix {
    m_max: usize,
    k_max: usize,
    rows: Vec<Vec<BigInt>>,
}

impl UpsilonMatrix {
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn at(&self, m: usize, k: usize) -> &BigInt {
        &self.rows[m][k]
    }
}

/// Build the surjection table for `m <= m_max`, `k <= k_max`.
pub fn upsilon(m_max: usize, k_max: usize) -> UpsilonMatrix {
    let mut rows = vec![vec![BigInt::zero(); k_max + 1]; m_max + 1];
    for m in 0..=m_max {
        for k in 0..=k_max {
            // k^m with 0^0 = 1 (the empty map is the one surjection
            // from nothing onto nothing)
            let mut acc = if m == 0 && k == 0 {
                BigInt::one()
            } else {
                BigInt::from(k).pow(m as u32)
            };
            for l in 0..k {
                acc -= binomial(k, l) * &rows[m][l];
            }
            rows[m][k] = acc;
        }
    }
    UpsilonMatrix { m_max, k_max, rows }
}

/// Disjunction of a family of clauses over n variables. Tautological if
/// any member is, or if one member posits a variable another negates;
/// the empty family gives the empty clause.
pub fn clause_disjunction(n: usize, clauses: &[&Clause]) -> Result<Clause> {
    let mut acc = Clause::empty(n);
    for c in clauses {
        if c.n() != n {
            return Err(Error::LengthMismatch { expected: n, got: c.n() });
        }
        acc = disjoin(&acc, c);
        if acc.is_top() {
            return Ok(acc);
        }
    }
    Ok(acc)
}

fn disjoin(a: &Clause, b: &Clause) -> Clause {
    let n = a.n();
    if a.is_top() || b.is_top() {
        return Clause::top(n);
    }
    // a variable positive on one side and negated on the other
    let pos_a = &a.v & &a.u.complement();
    let pos_b = &b.v & &b.u.complement();
    if !(&pos_a & &b.u).is_zero() || !(&pos_b & &a.u).is_zero() {
        return Clause::top(n);
    }
    Clause { v: &a.v | &b.v, u: &a.u | &b.u, is_top: false }
}

/// Enumeration limits for the subset expansion.
#[derive(Clone, Copy, Debug)]
pub struct SubsetBudget {
    /// Highest power m the builder will accept.
    pub max_power: usize,
    /// Cap on the number of clause subsets visited.
    pub max_subsets: u64,
}

impl Default for SubsetBudget {
    fn default() -> Self {
        SubsetBudget { max_power: 4, max_subsets: 10_000_000 }
    }
}

/// Subset-enumeration statistics, for budget accounting.
#[derive(Clone, Copy, Debug, Default)]
pub struct SubsetStats {
    /// Clause subsets actually visited (tautological disjunctions are
    /// counted once and their supersets pruned).
    pub visited: u64,
}

/// The F matrix of the falsified-clause count `g` at `x`: row m holds
/// the elementary components of `g^m`.
///
/// Expands `g^m = (sum_c g_c)^m` over clause subsets W with `|W| <= m`,
/// weighting each subset by the surjection count `Upsilon_{m,|W|}` and
/// reducing the product over W to the single indicator of the
/// disjunction. Subsets whose disjunction is tautological contribute
/// nothing and their supersets are pruned. Cost is O(n m) per visited
/// subset; the subset count itself is the price of MAX-SAT.
pub fn maxsat_f<S: Scalar>(
    cs: &ClauseSet,
    x: &BitString,
    m_max: usize,
    budget: &SubsetBudget,
) -> Result<FMatrix<S>> {
    maxsat_f_with_stats(cs, x, m_max, budget).map(|(f, _)| f)
}

/// [`maxsat_f`] plus enumeration statistics.
pub fn maxsat_f_with_stats<S: Scalar>(
    cs: &ClauseSet,
    x: &BitString,
    m_max: usize,
    budget: &SubsetBudget,
) -> Result<(FMatrix<S>, SubsetStats)> {
    let n = cs.n();
    if x.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x.len() });
    }
    if m_max > budget.max_power {
        return Err(Error::BudgetExceeded(format!(
            "power {m_max} exceeds the cap {} (raise the cap explicitly to override)",
            budget.max_power
        )));
    }
    let mut planned = BigInt::zero();
    for k in 0..=m_max.min(cs.len()) {
        planned += binomial(cs.len(), k);
    }
    if planned > BigInt::from(budget.max_subsets) {
        return Err(Error::BudgetExceeded(format!(
            "{planned} clause subsets of size <= {m_max} exceed the cap {}",
            budget.max_subsets
        )));
    }

    let ups = upsilon(m_max, m_max.min(cs.len()));
    let mut cache = KrawtchoukCache::new();
    let mut rows = vec![vec![S::zero(); n + 1]; m_max + 1];
    let mut stats = SubsetStats::default();

    // Depth-first over subsets in index order, extending the running
    // disjunction one clause at a time.
    let mut stack: Vec<(usize, usize, Clause)> = vec![(0, 0, Clause::empty(n))];
    while let Some((next, size, disj)) = stack.pop() {
        stats.visited += 1;
        accumulate_subset::<S>(&mut rows, &ups, &mut cache, &disj, size, m_max, x);
        if size < m_max {
            for idx in next..cs.len() {
                let extended = disjoin(&disj, &cs.clauses[idx]);
                if extended.is_top() {
                    stats.visited += 1; // formed, found tautological, pruned
                    continue;
                }
                stack.push((idx + 1, size + 1, extended));
            }
        }
    }
    Ok((FMatrix::from_rows(n, rows, FSource::MaxSat), stats))
}

fn accumulate_subset<S: Scalar>(
    rows: &mut [Vec<S>],
    ups: &UpsilonMatrix,
    cache: &mut KrawtchoukCache,
    disj: &Clause,
    size: usize,
    m_max: usize,
    x: &BitString,
) {
    let s = disj.width();
    let d = (&(x ^ disj.u()) & disj.v()).popcount();
    let den = BigInt::one() << s;
    let m_lo = if size == 0 { 0 } else { size };
    for m in m_lo..=m_max {
        let weight = ups.at(m, size);
        if weight.is_zero() {
            continue;
        }
        let k = cache.get(s);
        for j in 0..=s {
            let num = weight * k.at(j, d);
            rows[m][j] = rows[m][j].clone() + S::from_big_ratio(&num, &den);
        }
    }
}

/// Evaluate the falsified indicator of one clause on every assignment
/// (test helper for small n).
pub fn clause_g_table<S: Scalar>(c: &Clause) -> Result<FunctionTable<S>> {
    FunctionTable::from_fn(c.n(), |x| {
        if c.satisfied_by(x) {
            S::zero()
        } else {
            S::one()
        }
    })
}

/// Brute-force product of falsified indicators over all assignments;
/// used to cross-check the disjunction rule.
pub fn product_of_g<S: Scalar>(n: usize, clauses: &[&Clause]) -> Result<FunctionTable<S>> {
    FunctionTable::from_fn(n, |x| {
        let all_falsified = clauses.iter().all(|c| !c.satisfied_by(x));
        if all_falsified {
            S::one()
        } else {
            S::zero()
        }
    })
}
