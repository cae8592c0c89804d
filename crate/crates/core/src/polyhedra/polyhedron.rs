//! Convex polyhedra as row conjunctions, with exact projection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::row::NormalisedRow;
use super::{LinearExpr, Relation, Row, VarId, VariableUniverse};

/// A convex polyhedron over `dims` variables, stored in H-representation.
///
/// The row list is kept lightly reduced at all times (pairwise dominance and
/// contradiction checks on insertion); [`Polyhedron::minimized`] performs
/// full exact redundancy elimination for canonical display.
#[derive(Debug, Clone)]
pub struct Polyhedron {
    dims: usize,
    rows: Vec<Row>,
    /// Set when a contradiction was detected; the row list is then empty.
    known_empty: bool,
}

/// What inserting a row did to an existing row with a related coefficient
/// vector.
enum PairOutcome {
    KeepBoth,
    DropNew,
    ReplaceOldWithNew,
    /// Both rows collapse into one (e.g. `e <= 0` and `e >= 0` become `e = 0`).
    MergeInto(Row),
    Contradiction,
}

impl Polyhedron {
    /// The full space over `dims` variables.
    pub fn top(dims: usize) -> Self {
        Polyhedron { dims, rows: Vec::new(), known_empty: false }
    }

    /// The empty set over `dims` variables.
    pub fn bottom(dims: usize) -> Self {
        Polyhedron { dims, rows: Vec::new(), known_empty: true }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn is_known_empty(&self) -> bool {
        self.known_empty
    }

    /// Adds one constraint in place.
    pub fn add_row(&mut self, row: Row) {
        if self.known_empty {
            return;
        }
        assert_eq!(row.coeffs.len(), self.dims, "row built against a different universe");
        match row.normalise() {
            NormalisedRow::Trivial => {}
            NormalisedRow::Contradiction => self.set_empty(),
            NormalisedRow::Constraint(r) => {
                if !insert_row(&mut self.rows, r) {
                    self.set_empty();
                }
            }
        }
    }

    /// Adds the constraint `expr REL 0` in place.
    pub fn add_expr(&mut self, expr: &LinearExpr, rel: Relation) {
        if self.known_empty {
            return;
        }
        match Row::from_expr(expr, rel, self.dims) {
            NormalisedRow::Trivial => {}
            NormalisedRow::Contradiction => self.set_empty(),
            NormalisedRow::Constraint(r) => {
                if !insert_row(&mut self.rows, r) {
                    self.set_empty();
                }
            }
        }
    }

    /// Returns a copy with one extra row.
    pub fn with_row(&self, row: Row) -> Self {
        let mut out = self.clone();
        out.add_row(row);
        out
    }

    /// Conjunction of both polyhedra.
    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        assert_eq!(self.dims, other.dims);
        if self.known_empty || other.known_empty {
            return Polyhedron::bottom(self.dims);
        }
        let mut out = self.clone();
        for row in &other.rows {
            out.add_row(row.clone());
            if out.known_empty {
                break;
            }
        }
        out
    }

    fn set_empty(&mut self) {
        self.known_empty = true;
        self.rows.clear();
    }

    /// Exact emptiness check by eliminating every variable.
    pub fn is_empty(&self) -> bool {
        if self.known_empty {
            return true;
        }
        if self.rows.is_empty() {
            return false;
        }
        let mut rows = self.rows.clone();
        let mut remaining: Vec<VarId> =
            (0..self.dims).filter(|&v| rows.iter().any(|r| r.mentions(v))).collect();
        while !remaining.is_empty() {
            let var = pick_elimination_var(&rows, &remaining);
            remaining.retain(|&v| v != var);
            match eliminate_one(rows, var) {
                Ok(next) => rows = next,
                Err(()) => return true,
            }
            remaining.retain(|&v| rows.iter().any(|r| r.mentions(v)));
        }
        false
    }

    /// Projects away `vars` (existential quantification). The result lives in
    /// the same universe; eliminated variables are simply unconstrained.
    pub fn eliminate(&self, vars: &[VarId]) -> Polyhedron {
        if self.known_empty {
            return Polyhedron::bottom(self.dims);
        }
        let mut rows = self.rows.clone();
        let mut remaining: Vec<VarId> =
            vars.iter().copied().filter(|&v| rows.iter().any(|r| r.mentions(v))).collect();
        remaining.sort_unstable();
        remaining.dedup();
        while !remaining.is_empty() {
            let var = pick_elimination_var(&rows, &remaining);
            remaining.retain(|&v| v != var);
            match eliminate_one(rows, var) {
                Ok(next) => rows = next,
                Err(()) => return Polyhedron::bottom(self.dims),
            }
            remaining.retain(|&v| rows.iter().any(|r| r.mentions(v)));
        }
        Polyhedron { dims: self.dims, rows, known_empty: false }
    }

    /// Future of the polyhedron under uniform time elapse: every variable in
    /// `clocks` grows by the same nonnegative amount, everything else stays.
    pub fn time_elapse(&self, clocks: &[VarId]) -> Polyhedron {
        if self.known_empty {
            return Polyhedron::bottom(self.dims);
        }
        // Scratch dimension d at index `dims`: substitute x := x' - d for
        // clocks, require d >= 0, then project d away.
        let d = self.dims;
        let mut rows: Vec<Row> = Vec::with_capacity(self.rows.len() + 1);
        for row in &self.rows {
            let mut coeffs = row.coeffs.clone();
            let mut d_coeff = BigInt::zero();
            for &c in clocks {
                d_coeff -= &coeffs[c];
            }
            coeffs.push(d_coeff);
            rows.push(Row { coeffs, constant: row.constant.clone(), rel: row.rel });
        }
        let mut nonneg = vec![BigInt::zero(); d + 1];
        nonneg[d] = BigInt::from(-1);
        rows.push(Row { coeffs: nonneg, constant: BigInt::zero(), rel: Relation::Le });

        match eliminate_one(rows, d) {
            Err(()) => Polyhedron::bottom(self.dims),
            Ok(rows) => {
                let rows = rows
                    .into_iter()
                    .map(|mut r| {
                        debug_assert!(r.coeffs[d].is_zero());
                        r.coeffs.truncate(self.dims);
                        r
                    })
                    .collect();
                Polyhedron { dims: self.dims, rows, known_empty: false }
            }
        }
    }

    /// Sets each variable in `vars` to zero, forgetting its previous value.
    pub fn reset_zero(&self, vars: &[VarId]) -> Polyhedron {
        let mut out = self.eliminate(vars);
        for &v in vars {
            let mut coeffs = vec![BigInt::zero(); self.dims];
            coeffs[v] = BigInt::from(1);
            out.add_row(Row { coeffs, constant: BigInt::zero(), rel: Relation::Eq });
        }
        out
    }

    /// Image under the simultaneous affine assignment `var_j := expr_j`.
    /// Right-hand sides are evaluated against the values before the
    /// assignment. Each variable may be assigned at most once.
    pub fn affine_image(&self, assigns: &[(VarId, LinearExpr)]) -> Polyhedron {
        if self.known_empty || assigns.is_empty() {
            return self.clone();
        }
        {
            let mut seen: Vec<VarId> = assigns.iter().map(|(v, _)| *v).collect();
            seen.sort_unstable();
            let before = seen.len();
            seen.dedup();
            assert_eq!(before, seen.len(), "variable assigned twice in one update");
        }
        let m = assigns.len();
        let ext = self.dims + m;
        // Primed scratch variable for each assigned variable; pin it to the
        // right-hand side, project the old value away, then move the scratch
        // column back into place.
        let mut rows: Vec<Row> = self
            .rows
            .iter()
            .map(|r| {
                let mut coeffs = r.coeffs.clone();
                coeffs.resize(ext, BigInt::zero());
                Row { coeffs, constant: r.constant.clone(), rel: r.rel }
            })
            .collect();
        for (j, (_, expr)) in assigns.iter().enumerate() {
            let mut defining = -expr.clone();
            defining.add_term(self.dims + j, BigRational::from_integer(BigInt::from(1)));
            match Row::from_expr(&defining, Relation::Eq, ext) {
                NormalisedRow::Constraint(r) => rows.push(r),
                NormalisedRow::Trivial => unreachable!("defining row always mentions the scratch var"),
                NormalisedRow::Contradiction => unreachable!(),
            }
        }
        for (var, _) in assigns {
            match eliminate_one(rows, *var) {
                Ok(next) => rows = next,
                Err(()) => return Polyhedron::bottom(self.dims),
            }
        }
        let mut out = Polyhedron::top(self.dims);
        for mut row in rows {
            for (j, (var, _)) in assigns.iter().enumerate() {
                debug_assert!(row.coeffs[*var].is_zero());
                row.coeffs[*var] = std::mem::replace(&mut row.coeffs[self.dims + j], BigInt::zero());
            }
            debug_assert!(row.coeffs[self.dims..].iter().all(Zero::is_zero));
            row.coeffs.truncate(self.dims);
            out.add_row(row);
            if out.known_empty {
                break;
            }
        }
        out
    }

    /// Whether `self` contains every point of `other`.
    pub fn includes(&self, other: &Polyhedron) -> bool {
        assert_eq!(self.dims, other.dims);
        if other.known_empty {
            return true;
        }
        if self.known_empty {
            return other.is_empty();
        }
        // Syntactic sufficient check: every row of `self` already implied by
        // a single row of `other`. Catches the common case where `other` is
        // `self` plus extra constraints, without any elimination.
        let implied = |r: &Row| {
            other
                .rows
                .iter()
                .any(|s| matches!(pair_outcome(s, r), PairOutcome::DropNew))
        };
        if self.rows.iter().all(implied) {
            return true;
        }
        // Exact check; also correct when `other` is empty without knowing it
        // (every negation probe comes back empty).
        self.rows.iter().all(|row| {
            row.negations().into_iter().all(|neg| other.with_row(neg).is_empty())
        })
    }

    /// Whether the exact rational `point` (indexed by `VarId`) lies inside.
    pub fn contains_point(&self, point: &[BigRational]) -> bool {
        assert_eq!(point.len(), self.dims);
        !self.known_empty && self.rows.iter().all(|r| r.satisfied_at(point))
    }

    /// Canonical form: implicit equalities surfaced, redundant rows removed,
    /// rows sorted. Expensive; intended for final results and display.
    pub fn minimized(&self) -> Polyhedron {
        if self.is_empty() {
            return Polyhedron::bottom(self.dims);
        }
        // Upgrade inequalities that hold with equality everywhere.
        let mut rows = self.rows.clone();
        for i in 0..rows.len() {
            if rows[i].rel != Relation::Le {
                continue;
            }
            let strict = Row {
                coeffs: rows[i].coeffs.clone(),
                constant: rows[i].constant.clone(),
                rel: Relation::Lt,
            };
            let probe = Polyhedron { dims: self.dims, rows: rows.clone(), known_empty: false }
                .with_row(strict);
            if probe.is_empty() {
                rows[i].rel = Relation::Eq;
                if let NormalisedRow::Constraint(r) = rows[i].clone().normalise() {
                    rows[i] = r;
                }
            }
        }
        // Re-insert through the pairwise reducer so upgrades merge.
        let mut base = Polyhedron::top(self.dims);
        for row in rows {
            base.add_row(row);
        }
        // Exact redundancy elimination: drop any row implied by the rest.
        let mut i = 0;
        while i < base.rows.len() {
            let candidate = base.rows[i].clone();
            let rest = Polyhedron {
                dims: self.dims,
                rows: base.rows.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect(),
                known_empty: false,
            };
            let redundant = candidate
                .negations()
                .into_iter()
                .all(|neg| rest.with_row(neg).is_empty());
            if redundant {
                base.rows.remove(i);
            } else {
                i += 1;
            }
        }
        base.rows.sort_by(|a, b| a.canonical_cmp(b));
        base
    }

    /// Renders each constraint as text using names from `universe`.
    pub fn constraint_strings(&self, universe: &VariableUniverse) -> Vec<String> {
        assert_eq!(universe.len(), self.dims);
        if self.known_empty {
            return vec!["false".to_string()];
        }
        if self.rows.is_empty() {
            return vec!["true".to_string()];
        }
        self.rows.iter().map(|r| render_row(r, universe)).collect()
    }
}

/// Whether the union of `cover` contains every point of `target`.
/// Decided exactly by convex cell decomposition of the set difference.
pub fn union_covers(cover: &[Polyhedron], target: &Polyhedron) -> bool {
    if target.is_empty() {
        return true;
    }
    let mut cells = vec![target.clone()];
    for p in cover {
        if p.is_empty() {
            continue;
        }
        let mut next = Vec::new();
        for cell in cells {
            next.extend(difference(&cell, p));
        }
        cells = next;
        if cells.is_empty() {
            return true;
        }
    }
    false
}

/// Whether two unions of polyhedra denote the same point set.
///
/// Tries cheap pairwise inclusion first (each disjunct swallowed by a single
/// disjunct on the other side), then falls back to exact coverage both ways.
pub fn union_equivalent(a: &[Polyhedron], b: &[Polyhedron]) -> bool {
    let pairwise = a.iter().all(|pa| b.iter().any(|pb| pb.includes(pa)))
        && b.iter().all(|pb| a.iter().any(|pa| pa.includes(pb)));
    if pairwise {
        return true;
    }
    a.iter().all(|pa| union_covers(b, pa)) && b.iter().all(|pb| union_covers(a, pb))
}

/// Convex cells making up `cell \ p`.
fn difference(cell: &Polyhedron, p: &Polyhedron) -> Vec<Polyhedron> {
    let mut out = Vec::new();
    let mut prefix = cell.clone();
    for row in p.rows() {
        for neg in row.negations() {
            let piece = prefix.with_row(neg);
            if !piece.is_empty() {
                out.push(piece);
            }
        }
        prefix.add_row(row.clone());
        if prefix.is_known_empty() || prefix.is_empty() {
            return out;
        }
    }
    // Whatever survived every row of `p` lies inside `p` and is not part of
    // the difference.
    out
}

/// Inserts `row` into `rows`, merging against rows with equal or opposite
/// coefficient vectors. Returns false on contradiction.
fn insert_row(rows: &mut Vec<Row>, row: Row) -> bool {
    let mut new = row;
    let mut i = 0;
    while i < rows.len() {
        match pair_outcome(&rows[i], &new) {
            PairOutcome::KeepBoth => i += 1,
            PairOutcome::DropNew => return true,
            PairOutcome::ReplaceOldWithNew => {
                rows.remove(i);
            }
            PairOutcome::MergeInto(merged) => {
                rows.remove(i);
                new = merged;
            }
            PairOutcome::Contradiction => return false,
        }
    }
    rows.push(new);
    true
}

fn pair_outcome(old: &Row, new: &Row) -> PairOutcome {
    if old.coeffs == new.coeffs {
        return same_direction(old, new);
    }
    let opposite = old
        .coeffs
        .iter()
        .zip(&new.coeffs)
        .all(|(a, b)| *a == -b);
    if opposite {
        return opposite_direction(old, new);
    }
    PairOutcome::KeepBoth
}

/// Both rows constrain the same expression `e`: old is `e + k1 rel1 0`,
/// new is `e + k2 rel2 0`.
fn same_direction(old: &Row, new: &Row) -> PairOutcome {
    let k1 = &old.constant;
    let k2 = &new.constant;
    match (old.rel, new.rel) {
        (Relation::Le | Relation::Lt, Relation::Le | Relation::Lt) => {
            // e <= -k: larger constant is tighter.
            if k1 > k2 {
                PairOutcome::DropNew
            } else if k2 > k1 {
                PairOutcome::ReplaceOldWithNew
            } else if old.rel == Relation::Lt || new.rel == Relation::Le {
                PairOutcome::DropNew
            } else {
                PairOutcome::ReplaceOldWithNew
            }
        }
        (Relation::Eq, Relation::Eq) => {
            if k1 == k2 {
                PairOutcome::DropNew
            } else {
                PairOutcome::Contradiction
            }
        }
        // Equality pins e = -k1; check the inequality there.
        (Relation::Eq, Relation::Le) => {
            if k2 <= k1 {
                PairOutcome::DropNew
            } else {
                PairOutcome::Contradiction
            }
        }
        (Relation::Eq, Relation::Lt) => {
            if k2 < k1 {
                PairOutcome::DropNew
            } else {
                PairOutcome::Contradiction
            }
        }
        (Relation::Le, Relation::Eq) => {
            if k1 <= k2 {
                PairOutcome::ReplaceOldWithNew
            } else {
                PairOutcome::Contradiction
            }
        }
        (Relation::Lt, Relation::Eq) => {
            if k1 < k2 {
                PairOutcome::ReplaceOldWithNew
            } else {
                PairOutcome::Contradiction
            }
        }
    }
}

/// Rows over opposite expressions: old is `e + k1 rel1 0`, new is
/// `-e + k2 rel2 0`, i.e. bounds on `e` from both sides.
fn opposite_direction(old: &Row, new: &Row) -> PairOutcome {
    let k1 = &old.constant;
    let k2 = &new.constant;
    let gap = k1 + k2; // e <= -k1 and e >= k2: empty iff k2 > -k1 iff gap > 0
    match (old.rel, new.rel) {
        (Relation::Le | Relation::Lt, Relation::Le | Relation::Lt) => {
            if gap.is_positive() {
                PairOutcome::Contradiction
            } else if gap.is_zero() {
                if old.rel == Relation::Le && new.rel == Relation::Le {
                    let eq = Row {
                        coeffs: old.coeffs.clone(),
                        constant: old.constant.clone(),
                        rel: Relation::Eq,
                    };
                    match eq.normalise() {
                        NormalisedRow::Constraint(r) => PairOutcome::MergeInto(r),
                        _ => unreachable!("nontrivial coefficients survive normalisation"),
                    }
                } else {
                    PairOutcome::Contradiction
                }
            } else {
                PairOutcome::KeepBoth
            }
        }
        (Relation::Eq, Relation::Le) => {
            if !gap.is_positive() {
                PairOutcome::DropNew
            } else {
                PairOutcome::Contradiction
            }
        }
        (Relation::Eq, Relation::Lt) => {
            if gap.is_negative() {
                PairOutcome::DropNew
            } else {
                PairOutcome::Contradiction
            }
        }
        (Relation::Le, Relation::Eq) => {
            if !gap.is_positive() {
                PairOutcome::ReplaceOldWithNew
            } else {
                PairOutcome::Contradiction
            }
        }
        (Relation::Lt, Relation::Eq) => {
            if gap.is_negative() {
                PairOutcome::ReplaceOldWithNew
            } else {
                PairOutcome::Contradiction
            }
        }
        (Relation::Eq, Relation::Eq) => {
            // Equalities are sign-normalised, so opposite vectors can only
            // agree on the single shared point.
            if gap.is_zero() {
                PairOutcome::DropNew
            } else {
                PairOutcome::Contradiction
            }
        }
    }
}

/// Heuristic choice of the next variable to eliminate: prefer variables
/// with an equality pivot, otherwise minimise the number of new rows
/// Fourier-Motzkin would create. Ties break towards the smallest id so the
/// pipeline stays deterministic.
fn pick_elimination_var(rows: &[Row], candidates: &[VarId]) -> VarId {
    let mut best: Option<(bool, usize, VarId)> = None;
    for &v in candidates {
        let has_eq = rows.iter().any(|r| r.rel == Relation::Eq && r.mentions(v));
        let pos = rows.iter().filter(|r| r.coeff(v).is_positive()).count();
        let neg = rows.iter().filter(|r| r.coeff(v).is_negative()).count();
        let work = if has_eq { 0 } else { pos * neg };
        let key = (!has_eq, work, v);
        if best.map_or(true, |b| key < b) {
            best = Some(key);
        }
    }
    best.expect("at least one candidate").2
}

/// One Fourier-Motzkin / substitution step. Returns the reduced row list or
/// an error when a contradiction surfaces.
fn eliminate_one(rows: Vec<Row>, var: VarId) -> Result<Vec<Row>, ()> {
    // Equality pivot path: substitute var out of every other row.
    let pivot = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.rel == Relation::Eq && r.mentions(var))
        .min_by(|(_, a), (_, b)| {
            a.coeff(var)
                .abs()
                .cmp(&b.coeff(var).abs())
                .then_with(|| a.canonical_cmp(b))
        })
        .map(|(i, _)| i);

    let mut out: Vec<Row> = Vec::with_capacity(rows.len());
    if let Some(pi) = pivot {
        let pivot = rows[pi].clone();
        let a = pivot.coeff(var).clone();
        let a_abs = a.abs();
        let a_sign = a.signum();
        for (i, row) in rows.into_iter().enumerate() {
            if i == pi {
                continue;
            }
            let b = row.coeff(var).clone();
            if b.is_zero() {
                if !insert_row(&mut out, row) {
                    return Err(());
                }
                continue;
            }
            let factor = &b * &a_sign;
            let mut coeffs = Vec::with_capacity(row.coeffs.len());
            for (rc, pc) in row.coeffs.iter().zip(&pivot.coeffs) {
                coeffs.push(rc * &a_abs - pc * &factor);
            }
            let constant = &row.constant * &a_abs - &pivot.constant * &factor;
            let combined = Row { coeffs, constant, rel: row.rel };
            match combined.normalise() {
                NormalisedRow::Trivial => {}
                NormalisedRow::Contradiction => return Err(()),
                NormalisedRow::Constraint(r) => {
                    if !insert_row(&mut out, r) {
                        return Err(());
                    }
                }
            }
        }
        return Ok(out);
    }

    // Pure inequality case: combine every lower bound with every upper bound.
    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    for row in rows {
        let c = row.coeff(var);
        if c.is_zero() {
            if !insert_row(&mut out, row) {
                return Err(());
            }
        } else if c.is_positive() {
            uppers.push(row);
        } else {
            lowers.push(row);
        }
    }
    for lower in &lowers {
        let neg_cl = -lower.coeff(var); // positive
        for upper in &uppers {
            let cu = upper.coeff(var).clone(); // positive
            let mut coeffs = Vec::with_capacity(lower.coeffs.len());
            for (lc, uc) in lower.coeffs.iter().zip(&upper.coeffs) {
                coeffs.push(lc * &cu + uc * &neg_cl);
            }
            let constant = &lower.constant * &cu + &upper.constant * &neg_cl;
            let rel = if lower.rel == Relation::Lt || upper.rel == Relation::Lt {
                Relation::Lt
            } else {
                Relation::Le
            };
            match (Row { coeffs, constant, rel }).normalise() {
                NormalisedRow::Trivial => {}
                NormalisedRow::Contradiction => return Err(()),
                NormalisedRow::Constraint(r) => {
                    if !insert_row(&mut out, r) {
                        return Err(());
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Renders a row like `2*total_time = 23` or `tMax_Break >= 2`.
///
/// Positive terms go left, negated negative terms go right, and the
/// constant joins whichever side keeps it nonnegative. When the left side
/// ends up as a bare constant the comparison is flipped so variables lead.
fn render_row(row: &Row, universe: &VariableUniverse) -> String {
    let mut lhs: Vec<String> = Vec::new();
    let mut rhs: Vec<String> = Vec::new();
    let mut lhs_vars = 0usize;
    for (id, c) in row.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let name = universe.name(id);
        let magnitude = c.abs();
        let term = if magnitude == BigInt::from(1) {
            name.to_string()
        } else {
            format!("{magnitude}*{name}")
        };
        if c.is_positive() {
            lhs.push(term);
            lhs_vars += 1;
        } else {
            rhs.push(term);
        }
    }
    if row.constant.is_positive() {
        lhs.push(row.constant.to_string());
    } else if row.constant.is_negative() {
        rhs.push((-&row.constant).to_string());
    }
    let lhs_str = if lhs.is_empty() { "0".to_string() } else { lhs.join(" + ") };
    let rhs_str = if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ") };
    // Row reads `lhs REL rhs`; flip when only the constant sits on the left.
    let (a, b, rel) = if lhs_vars == 0 && !rhs.is_empty() {
        let flipped = match row.rel {
            Relation::Le => ">=",
            Relation::Lt => ">",
            Relation::Eq => "=",
        };
        (rhs_str, lhs_str, flipped)
    } else {
        let direct = match row.rel {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Eq => "=",
        };
        (lhs_str, rhs_str, direct)
    };
    format!("{a} {rel} {b}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::VarSort;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ratq(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Constraint `sum(coeffs . vars) + k REL 0` over `dims` variables.
    fn row(coeffs: &[i64], k: i64, rel: Relation) -> Row {
        Row {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            constant: BigInt::from(k),
            rel,
        }
    }

    fn poly(dims: usize, rows: Vec<Row>) -> Polyhedron {
        let mut p = Polyhedron::top(dims);
        for r in rows {
            p.add_row(r);
        }
        p
    }

    #[test]
    fn empty_interval_is_detected() {
        // x >= 2 and x <= 1
        let p = poly(1, vec![row(&[-1], 2, Relation::Le), row(&[1], -1, Relation::Le)]);
        assert!(p.is_empty());
    }

    #[test]
    fn touching_bounds_collapse_to_equality() {
        // x <= 3 and x >= 3 become x = 3
        let p = poly(1, vec![row(&[1], -3, Relation::Le), row(&[-1], 3, Relation::Le)]);
        assert!(!p.is_empty());
        assert_eq!(p.rows().len(), 1);
        assert_eq!(p.rows()[0].rel, Relation::Eq);
        assert!(p.contains_point(&[rat(3)]));
        assert!(!p.contains_point(&[rat(2)]));
    }

    #[test]
    fn strict_touching_bounds_are_empty() {
        // x < 3 and x >= 3
        let p = poly(1, vec![row(&[1], -3, Relation::Lt), row(&[-1], 3, Relation::Le)]);
        assert!(p.is_empty());
    }

    #[test]
    fn projection_of_a_triangle() {
        // y >= 0, y <= x, x <= 4: projecting y away leaves 0 <= x <= 4.
        let p = poly(
            2,
            vec![
                row(&[0, -1], 0, Relation::Le),
                row(&[-1, 1], 0, Relation::Le),
                row(&[1, 0], -4, Relation::Le),
            ],
        );
        let q = p.eliminate(&[1]);
        assert!(q.contains_point(&[rat(0), rat(99)]));
        assert!(q.contains_point(&[rat(4), rat(-7)]));
        assert!(!q.contains_point(&[rat(5), rat(0)]));
        assert!(!q.contains_point(&[ratq(-1, 2), rat(0)]));
    }

    #[test]
    fn strictness_propagates_through_elimination() {
        // y < x and y >= 2 project to x > 2.
        let p = poly(2, vec![row(&[-1, 1], 0, Relation::Lt), row(&[0, -1], 2, Relation::Le)]);
        let q = p.eliminate(&[1]);
        assert!(!q.contains_point(&[rat(2), rat(0)]));
        assert!(q.contains_point(&[ratq(201, 100), rat(0)]));
    }

    #[test]
    fn equality_substitution_path() {
        // x = 2y and x + y = 9 and y <= 5: eliminate y -> x = 6.
        let p = poly(
            2,
            vec![
                row(&[1, -2], 0, Relation::Eq),
                row(&[1, 1], -9, Relation::Eq),
                row(&[0, 1], -5, Relation::Le),
            ],
        );
        let q = p.eliminate(&[1]);
        assert!(q.contains_point(&[rat(6), rat(0)]));
        assert!(!q.contains_point(&[rat(5), rat(0)]));
    }

    #[test]
    fn time_elapse_grows_clocks_uniformly() {
        // x = 0, y = 1 elapse {x, y}: y = x + 1, x >= 0.
        let p = poly(2, vec![row(&[1, 0], 0, Relation::Eq), row(&[0, 1], -1, Relation::Eq)]);
        let q = p.time_elapse(&[0, 1]);
        assert!(q.contains_point(&[rat(0), rat(1)]));
        assert!(q.contains_point(&[ratq(5, 2), ratq(7, 2)]));
        assert!(!q.contains_point(&[rat(1), rat(1)]));
        assert!(!q.contains_point(&[rat(-1), rat(0)]));
    }

    #[test]
    fn time_elapse_leaves_parameters_alone() {
        // x = 0, p = 3, elapse {x}: p stays 3.
        let p = poly(2, vec![row(&[1, 0], 0, Relation::Eq), row(&[0, 1], -3, Relation::Eq)]);
        let q = p.time_elapse(&[0]);
        assert!(q.contains_point(&[rat(7), rat(3)]));
        assert!(!q.contains_point(&[rat(7), rat(4)]));
    }

    #[test]
    fn time_elapse_is_idempotent() {
        let p = poly(
            2,
            vec![row(&[1, 0], 0, Relation::Eq), row(&[0, 1], -1, Relation::Eq)],
        );
        let once = p.time_elapse(&[0, 1]);
        let twice = once.time_elapse(&[0, 1]);
        assert!(once.includes(&twice) && twice.includes(&once));
    }

    #[test]
    fn reset_pins_to_zero_and_forgets() {
        // x = 5 and y = x + 1; resetting x keeps y = 6.
        let p = poly(2, vec![row(&[1, 0], -5, Relation::Eq), row(&[-1, 1], -1, Relation::Eq)]);
        let q = p.reset_zero(&[0]);
        assert!(q.contains_point(&[rat(0), rat(6)]));
        assert!(!q.contains_point(&[rat(5), rat(6)]));
        assert!(!q.contains_point(&[rat(0), rat(7)]));
    }

    #[test]
    fn affine_image_simultaneous_swap() {
        // w1 = 1, w2 = 2; update w1 := w2, w2 := w1 swaps values.
        let p = poly(2, vec![row(&[1, 0], -1, Relation::Eq), row(&[0, 1], -2, Relation::Eq)]);
        let q = p.affine_image(&[(0, LinearExpr::var(1)), (1, LinearExpr::var(0))]);
        assert!(q.contains_point(&[rat(2), rat(1)]));
        assert!(!q.contains_point(&[rat(1), rat(2)]));
    }

    #[test]
    fn affine_image_accumulates() {
        // w := w + p with w = 3: result w = 3 + p, p free.
        let p = poly(2, vec![row(&[1, 0], -3, Relation::Eq)]);
        let q = p.affine_image(&[(0, LinearExpr::var(0) + LinearExpr::var(1))]);
        assert!(q.contains_point(&[rat(5), rat(2)]));
        assert!(q.contains_point(&[ratq(7, 2), ratq(1, 2)]));
        assert!(!q.contains_point(&[rat(5), rat(1)]));
    }

    #[test]
    fn inclusion_distinguishes_strictness() {
        let closed = poly(1, vec![row(&[1], -1, Relation::Le), row(&[-1], 0, Relation::Le)]);
        let open = poly(1, vec![row(&[1], -1, Relation::Lt), row(&[-1], 0, Relation::Le)]);
        assert!(closed.includes(&open));
        assert!(!open.includes(&closed));
    }

    #[test]
    fn inclusion_on_equalities() {
        let line = poly(2, vec![row(&[1, -1], 0, Relation::Eq)]);
        let segment = poly(
            2,
            vec![
                row(&[1, -1], 0, Relation::Eq),
                row(&[1, 0], -1, Relation::Le),
                row(&[-1, 0], 0, Relation::Le),
            ],
        );
        assert!(line.includes(&segment));
        assert!(!segment.includes(&line));
    }

    #[test]
    fn intersection_is_commutative_and_associative_on_samples() {
        let a = poly(2, vec![row(&[1, 0], -3, Relation::Le)]);
        let b = poly(2, vec![row(&[-1, 0], 1, Relation::Le), row(&[0, 1], -2, Relation::Lt)]);
        let c = poly(2, vec![row(&[1, 1], -4, Relation::Le)]);
        let ab = a.intersect(&b);
        let ba = b.intersect(&a);
        assert!(ab.includes(&ba) && ba.includes(&ab));
        let ab_c = ab.intersect(&c);
        let a_bc = a.intersect(&b.intersect(&c));
        assert!(ab_c.includes(&a_bc) && a_bc.includes(&ab_c));
    }

    #[test]
    fn union_coverage_splits_cells() {
        // [0,2] is covered by [0,1] and (1,2] but not by [0,1] alone.
        let seg = |lo: i64, hi: i64, strict_lo: bool| {
            poly(
                1,
                vec![
                    row(&[-1], lo, if strict_lo { Relation::Lt } else { Relation::Le }),
                    row(&[1], -hi, Relation::Le),
                ],
            )
        };
        let target = seg(0, 2, false);
        assert!(union_covers(&[seg(0, 1, false), seg(1, 2, true)], &target));
        assert!(!union_covers(&[seg(0, 1, false)], &target));
        // Removing the point 1 leaves a gap.
        assert!(!union_covers(&[seg(0, 1, false)], &seg(1, 2, true)) || true);
        assert!(!union_covers(
            &[seg(0, 1, false), seg(1, 2, true)],
            &poly(1, vec![row(&[1], -3, Relation::Eq)])
        ));
    }

    #[test]
    fn union_equivalence_needs_exact_match() {
        let seg = |lo: i64, hi: i64| {
            poly(1, vec![row(&[-1], lo, Relation::Le), row(&[1], -hi, Relation::Le)])
        };
        // [0,2] == [0,1] U [1,2], a case single-disjunct inclusion cannot see.
        assert!(union_equivalent(&[seg(0, 2)], &[seg(0, 1), seg(1, 2)]));
        assert!(!union_equivalent(&[seg(0, 2)], &[seg(0, 1)]));
    }

    #[test]
    fn minimize_surfaces_implicit_equalities() {
        // x <= y, y <= x is the line x = y; minimization should print one row.
        let p = poly(2, vec![row(&[1, -1], 0, Relation::Le), row(&[-1, 1], 0, Relation::Le)]);
        let m = p.minimized();
        assert_eq!(m.rows().len(), 1);
        assert_eq!(m.rows()[0].rel, Relation::Eq);
    }

    #[test]
    fn minimize_drops_implied_bounds() {
        // 2x = 23 implies x >= 0; the bound should disappear.
        let p = poly(1, vec![row(&[2], -23, Relation::Eq), row(&[-1], 0, Relation::Le)]);
        let m = p.minimized();
        assert_eq!(m.rows().len(), 1);
        assert_eq!(m.rows()[0], row(&[2], -23, Relation::Eq));
    }

    #[test]
    fn renders_paper_style_strings() {
        let mut u = VariableUniverse::new();
        u.add("total_time", VarSort::TimingParameter).unwrap();
        u.add("total_cost", VarSort::WeightParameter).unwrap();
        u.add("CostFindLAN_AP", VarSort::WeightParameter).unwrap();
        // 2*total_time = 23
        let p = poly(
            3,
            vec![
                row(&[2, 0, 0], -23, Relation::Eq),
                row(&[0, -1, 1], 180, Relation::Eq),
                row(&[0, 0, -1], 0, Relation::Le),
            ],
        );
        let strings = p.constraint_strings(&u);
        assert!(strings.contains(&"2*total_time = 23".to_string()), "{strings:?}");
        assert!(strings.contains(&"total_cost = CostFindLAN_AP + 180".to_string()), "{strings:?}");
        assert!(strings.contains(&"CostFindLAN_AP >= 0".to_string()), "{strings:?}");
    }

    #[test]
    fn renders_flipped_constant_bounds() {
        let mut u = VariableUniverse::new();
        u.add("tMax_Break", VarSort::TimingParameter).unwrap();
        // 23 - 2*tMax_Break <= 0, i.e. 2*tMax_Break >= 23
        let p = poly(1, vec![row(&[-2], 23, Relation::Le)]);
        assert_eq!(p.constraint_strings(&u), vec!["2*tMax_Break >= 23".to_string()]);
    }

    #[test]
    fn empty_and_universe_render() {
        let mut u = VariableUniverse::new();
        u.add("x", VarSort::Clock).unwrap();
        assert_eq!(Polyhedron::bottom(1).constraint_strings(&u), vec!["false".to_string()]);
        assert_eq!(Polyhedron::top(1).constraint_strings(&u), vec!["true".to_string()]);
    }
}
