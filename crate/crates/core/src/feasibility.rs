//! Constraint engine: exact feasible regions for partially fixed
//! correlation tensors.
//!
//! Each of the 8 outcome probabilities contributes one linear inequality
//! in the free components. With at most a few free components the region
//! is an exact convex polytope, computed by enumerating intersections of
//! constraint subsets instead of running a generic LP; the headline
//! "unique point" results then carry no solver-tolerance ambiguity.
//! Inequality coefficients are generated from the sign structure in
//! [`crate::algebra::eq_coefficient`], never hand-entered.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{eq_coefficient, Component, CorrelationTensor};
use crate::quantum::OutcomeTriple;

/// Default feasibility tolerance on probabilities and vertex coordinates.
/// All paper-scale quantities are rationals with small denominators, far
/// above this.
pub const FEAS_TOL: f64 = 1e-9;

/// Pivot threshold below which a linear system is treated as singular.
const SINGULAR_TOL: f64 = 1e-12;

/// Bisection precision for the visibility threshold.
const BISECT_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum FeasibilityError {
    #[error("{0} free components exceed the supported maximum of 3")]
    TooManyFreeComponents(usize),
    #[error("fixed value {value} for {component} lies outside [-1, 1]")]
    FixedValueOutOfRange { component: Component, value: f64 },
    #[error("product constraint is only defined for pair components, not {0}")]
    ProductOnNonPair(Component),
    #[error("product constraint on {0} requires both factor singles to be fixed")]
    ProductRequiresFixedSingles(Component),
    #[error("component {0} is not free in the originating spec")]
    ComponentNotFree(Component),
    #[error("visibility is undefined: QM value of {0} is zero")]
    ZeroQMValue(Component),
    #[error("visibility cannot scale {0}; pick a single or pair component")]
    UnsupportedVisibilityComponent(Component),
    #[error("feasibility predicate failed the monotonicity consistency check")]
    NonMonotonePredicate,
}

/// Status of one tensor component in a constraint spec.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    /// Pinned to a value (Condition 1: the QM prediction).
    Fixed(f64),
    /// Left to the model; the engine searches over it.
    Free,
    /// Pair component pinned to the product of its two fixed singles
    /// (Condition 2: complete loss of correlation).
    Product,
}

/// Per-component constraint assignment for the 7 correlators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub e_a: Constraint,
    pub e_b: Constraint,
    pub e_c: Constraint,
    pub e_ab: Constraint,
    pub e_ac: Constraint,
    pub e_bc: Constraint,
    pub e_abc: Constraint,
}

impl ConstraintSpec {
    /// Everything fixed at the given tensor's values.
    pub fn fixed_at(t: &CorrelationTensor) -> Self {
        let mut spec = ConstraintSpec {
            e_a: Constraint::Free,
            e_b: Constraint::Free,
            e_c: Constraint::Free,
            e_ab: Constraint::Free,
            e_ac: Constraint::Free,
            e_bc: Constraint::Free,
            e_abc: Constraint::Free,
        };
        for c in Component::ALL {
            spec.set(c, Constraint::Fixed(t.get(c)));
        }
        spec
    }

    pub fn get(&self, component: Component) -> Constraint {
        match component {
            Component::EA => self.e_a,
            Component::EB => self.e_b,
            Component::EC => self.e_c,
            Component::EAB => self.e_ab,
            Component::EAC => self.e_ac,
            Component::EBC => self.e_bc,
            Component::EABC => self.e_abc,
        }
    }

    pub fn set(&mut self, component: Component, constraint: Constraint) {
        match component {
            Component::EA => self.e_a = constraint,
            Component::EB => self.e_b = constraint,
            Component::EC => self.e_c = constraint,
            Component::EAB => self.e_ab = constraint,
            Component::EAC => self.e_ac = constraint,
            Component::EBC => self.e_bc = constraint,
            Component::EABC => self.e_abc = constraint,
        }
    }

    pub fn free_components(&self) -> Vec<Component> {
        Component::ALL
            .into_iter()
            .filter(|c| matches!(self.get(*c), Constraint::Free))
            .collect()
    }

    /// Fixed (or product-resolved) value of a non-free component.
    pub fn resolved_value(&self, component: Component) -> Option<f64> {
        match self.get(component) {
            Constraint::Fixed(v) => Some(v),
            Constraint::Free => None,
            Constraint::Product => {
                let (f1, f2) = component.factor_singles()?;
                match (self.get(f1), self.get(f2)) {
                    (Constraint::Fixed(a), Constraint::Fixed(b)) => Some(a * b),
                    _ => None,
                }
            }
        }
    }

    /// Affine form of the 8 probability inequalities: for each outcome,
    /// p = row[0] + sum_j row[1 + j] * x_j over the free components.
    fn affine_rows(&self) -> Result<(Vec<Component>, Vec<Vec<f64>>), FeasibilityError> {
        for component in Component::ALL {
            match self.get(component) {
                Constraint::Fixed(value) => {
                    if value.abs() > 1.0 + 1e-9 {
                        return Err(FeasibilityError::FixedValueOutOfRange { component, value });
                    }
                }
                Constraint::Free => {}
                Constraint::Product => {
                    if !component.is_pair() {
                        return Err(FeasibilityError::ProductOnNonPair(component));
                    }
                    if self.resolved_value(component).is_none() {
                        return Err(FeasibilityError::ProductRequiresFixedSingles(component));
                    }
                }
            }
        }
        let free = self.free_components();
        let mut rows = Vec::with_capacity(8);
        for outcome in OutcomeTriple::all() {
            let mut row = vec![0.0; 1 + free.len()];
            let mut constant = 1.0;
            for component in Component::ALL {
                let coeff = eq_coefficient(component, outcome);
                match self.resolved_value(component) {
                    Some(value) => constant += coeff * value,
                    None => {
                        let j = free.iter().position(|c| *c == component).unwrap();
                        row[1 + j] = coeff / 8.0;
                    }
                }
            }
            row[0] = constant / 8.0;
            rows.push(row);
        }
        Ok((free, rows))
    }
}

/// Exact convex region of the free components for which all 8 outcome
/// probabilities are non-negative. `dimension` is the number of free
/// components; the region itself may be lower-dimensional (the GHZ result
/// is a single point).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibleRegion {
    pub empty: bool,
    pub dimension: usize,
    pub free: Vec<Component>,
    /// Polytope vertices in free-component coordinates: interval endpoints
    /// for dimension 1, an ordered boundary for dimension 2.
    pub vertices: Vec<Vec<f64>>,
}

impl FeasibleRegion {
    pub fn is_point(&self) -> bool {
        !self.empty && self.vertices.len() == 1
    }
}

fn solve_square(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot_row][col].abs() < SINGULAR_TOL {
            return None;
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for row in 0..n {
            if row != col {
                let factor = m[row][col] / m[col][col];
                for k in col..n {
                    let sub = factor * m[col][k];
                    m[row][k] -= sub;
                }
                rhs[row] -= factor * rhs[col];
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn recurse(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            recurse(i + 1, n, k, current, out);
            current.pop();
        }
    }
    recurse(0, n, k, &mut current, &mut out);
    out
}

fn evaluate_row(row: &[f64], point: &[f64]) -> f64 {
    row[0] + row[1..].iter().zip(point).map(|(c, x)| c * x).sum::<f64>()
}

fn satisfies_all(rows: &[Vec<f64>], point: &[f64], tol: f64) -> bool {
    rows.iter().all(|row| evaluate_row(row, point) >= -tol)
}

/// Computes the feasible region with the default tolerance.
pub fn feasible_region(spec: &ConstraintSpec) -> Result<FeasibleRegion, FeasibilityError> {
    feasible_region_with_tol(spec, FEAS_TOL)
}

/// Computes the feasible region by intersecting the 8 probability
/// half-spaces; vertices are intersections of constraint subsets that
/// satisfy every inequality within `tol`.
pub fn feasible_region_with_tol(
    spec: &ConstraintSpec,
    tol: f64,
) -> Result<FeasibleRegion, FeasibilityError> {
    let (free, rows) = spec.affine_rows()?;
    let dim = free.len();
    if dim > 3 {
        return Err(FeasibilityError::TooManyFreeComponents(dim));
    }

    if dim == 0 {
        let feasible = satisfies_all(&rows, &[], tol);
        return Ok(FeasibleRegion {
            empty: !feasible,
            dimension: 0,
            free,
            vertices: if feasible { vec![vec![]] } else { vec![] },
        });
    }

    let mut vertices: Vec<Vec<f64>> = Vec::new();
    for subset in combinations(rows.len(), dim) {
        let m: Vec<Vec<f64>> = subset.iter().map(|&i| rows[i][1..].to_vec()).collect();
        let rhs: Vec<f64> = subset.iter().map(|&i| -rows[i][0]).collect();
        let Some(point) = solve_square(m, rhs) else {
            continue;
        };
        if !satisfies_all(&rows, &point, tol) {
            continue;
        }
        let duplicate = vertices.iter().any(|v| {
            v.iter()
                .zip(&point)
                .all(|(a, b)| (a - b).abs() <= FEAS_TOL)
        });
        if !duplicate {
            vertices.push(point);
        }
    }

    if dim == 1 {
        vertices.sort_by(|a, b| a[0].total_cmp(&b[0]));
    } else if dim == 2 && vertices.len() > 2 {
        let n = vertices.len() as f64;
        let cx = vertices.iter().map(|v| v[0]).sum::<f64>() / n;
        let cy = vertices.iter().map(|v| v[1]).sum::<f64>() / n;
        vertices.sort_by(|a, b| {
            (a[1] - cy)
                .atan2(a[0] - cx)
                .total_cmp(&(b[1] - cy).atan2(b[0] - cx))
        });
    }

    Ok(FeasibleRegion {
        empty: vertices.is_empty(),
        dimension: dim,
        free,
        vertices,
    })
}

/// Exact min and max of one free coordinate over the region; `None` iff
/// the region is empty.
pub fn project_interval(
    region: &FeasibleRegion,
    component: Component,
) -> Result<Option<(f64, f64)>, FeasibilityError> {
    let Some(j) = region.free.iter().position(|c| *c == component) else {
        return Err(FeasibilityError::ComponentNotFree(component));
    };
    if region.empty {
        return Ok(None);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in &region.vertices {
        lo = lo.min(v[j]);
        hi = hi.max(v[j]);
    }
    Ok(Some((lo, hi)))
}

/// Maximizes, over the free components, the minimum of the 8 outcome
/// probabilities. The value is >= 0 iff the region is nonempty; when
/// negative it is the least-bad negativity any model can achieve, solved
/// exactly by vertex enumeration of the epigraph.
pub fn max_min_probability(
    spec: &ConstraintSpec,
) -> Result<(f64, Vec<f64>), FeasibilityError> {
    let (free, rows) = spec.affine_rows()?;
    let dim = free.len();

    if dim == 0 {
        let value = rows
            .iter()
            .map(|row| row[0])
            .fold(f64::INFINITY, f64::min);
        return Ok((value, vec![]));
    }

    // Maximize t subject to p_i(x) >= t. The optimum sits at a vertex of
    // the epigraph polyhedron, where dim + 1 constraints are active.
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut consider = |point: &[f64]| {
        let value = rows
            .iter()
            .map(|row| evaluate_row(row, point))
            .fold(f64::INFINITY, f64::min);
        if best.as_ref().map_or(true, |(b, _)| value > *b) {
            best = Some((value, point.to_vec()));
        }
    };
    consider(&vec![0.0; dim]);
    for subset in combinations(rows.len(), dim + 1) {
        // Unknowns (x, t): p_i(x) - t = 0 for each row in the subset.
        let mut m = Vec::with_capacity(dim + 1);
        let mut rhs = Vec::with_capacity(dim + 1);
        for &i in &subset {
            let mut row = rows[i][1..].to_vec();
            row.push(-1.0);
            m.push(row);
            rhs.push(-rows[i][0]);
        }
        if let Some(solution) = solve_square(m, rhs) {
            consider(&solution[..dim]);
        }
    }
    Ok(best.expect("candidate set is never empty"))
}

/// The largest visibility V in [0, 1] for which scaling the component's QM
/// value by V (others per Condition 1, triple free) stays feasible;
/// companion to [`visibility_range`].
pub fn visibility_max(
    qm: &CorrelationTensor,
    component: Component,
) -> Result<f64, FeasibilityError> {
    Ok(visibility_range(qm, component)?.1)
}

/// Minimal and maximal feasible visibility in [0, 1] for the scaled
/// component. The minimum is found by bisection over the monotone
/// feasibility predicate to absolute precision 1e-9; V = 1 (the QM tensor
/// itself) must be feasible or the predicate is reported as inconsistent.
pub fn visibility_range(
    qm: &CorrelationTensor,
    component: Component,
) -> Result<(f64, f64), FeasibilityError> {
    if component == Component::EABC {
        return Err(FeasibilityError::UnsupportedVisibilityComponent(component));
    }
    let qm_value = qm.get(component);
    if qm_value.abs() < 1e-12 {
        return Err(FeasibilityError::ZeroQMValue(component));
    }

    let feasible = |v: f64| -> Result<bool, FeasibilityError> {
        let mut spec = ConstraintSpec::fixed_at(qm);
        spec.set(component, Constraint::Fixed(v * qm_value));
        spec.set(Component::EABC, Constraint::Free);
        Ok(!feasible_region(&spec)?.empty)
    };

    if !feasible(1.0)? {
        return Err(FeasibilityError::NonMonotonePredicate);
    }
    let v_min = if feasible(0.0)? {
        0.0
    } else {
        let mut lo = 0.0;
        let mut hi = 1.0;
        while hi - lo > BISECT_TOL {
            let mid = 0.5 * (lo + hi);
            if feasible(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    // Consistency: points well below the threshold must stay infeasible.
    if v_min > 1e-6 && (feasible(v_min / 2.0)? || feasible(v_min / 4.0)?) {
        return Err(FeasibilityError::NonMonotonePredicate);
    }
    Ok((v_min, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::is_valid;

    fn ghz_spec() -> ConstraintSpec {
        ConstraintSpec {
            e_a: Constraint::Fixed(0.0),
            e_b: Constraint::Fixed(0.0),
            e_c: Constraint::Fixed(0.0),
            e_ab: Constraint::Free,
            e_ac: Constraint::Fixed(1.0),
            e_bc: Constraint::Fixed(1.0),
            e_abc: Constraint::Free,
        }
    }

    fn w_spec() -> ConstraintSpec {
        let mut spec = ghz_spec();
        spec.e_ac = Constraint::Fixed(2.0 / 3.0);
        spec.e_bc = Constraint::Fixed(2.0 / 3.0);
        spec
    }

    fn ghz_qm_tensor() -> CorrelationTensor {
        CorrelationTensor {
            e_a: 0.0,
            e_b: 0.0,
            e_c: 0.0,
            e_ab: 1.0,
            e_ac: 1.0,
            e_bc: 1.0,
            e_abc: 0.0,
        }
    }

    fn w_qm_tensor() -> CorrelationTensor {
        CorrelationTensor {
            e_a: 0.0,
            e_b: 0.0,
            e_c: 0.0,
            e_ab: 2.0 / 3.0,
            e_ac: 2.0 / 3.0,
            e_bc: 2.0 / 3.0,
            e_abc: 0.0,
        }
    }

    #[test]
    fn ghz_region_is_the_unique_qm_point() {
        let region = feasible_region(&ghz_spec()).unwrap();
        assert!(!region.empty);
        assert!(region.is_point());
        assert_eq!(region.dimension, 2);
        let v = &region.vertices[0];
        assert!((v[0] - 1.0).abs() < 1e-9);
        assert!(v[1].abs() < 1e-9);
    }

    #[test]
    fn ghz_condition2_region_is_empty() {
        let mut spec = ghz_spec();
        spec.e_ab = Constraint::Fixed(0.0);
        let region = feasible_region(&spec).unwrap();
        assert!(region.empty);
        assert!(region.vertices.is_empty());
    }

    #[test]
    fn w_region_polygon_and_interval() {
        let region = feasible_region(&w_spec()).unwrap();
        assert!(!region.empty);
        assert_eq!(region.dimension, 2);
        // Bounded by u - w >= 1/3, u + w >= 1/3, u + w <= 1, u - w <= 1.
        assert_eq!(region.vertices.len(), 4);
        for v in &region.vertices {
            let (u, w) = (v[0], v[1]);
            assert!(u - w >= 1.0 / 3.0 - 1e-9);
            assert!(u + w >= 1.0 / 3.0 - 1e-9);
            assert!(u + w <= 1.0 + 1e-9);
            assert!(u - w <= 1.0 + 1e-9);
        }
        let (lo, hi) = project_interval(&region, Component::EAB).unwrap().unwrap();
        assert!((lo - 1.0 / 3.0).abs() < 1e-9);
        assert!((hi - 1.0).abs() < 1e-9);
        let (wlo, whi) = project_interval(&region, Component::EABC).unwrap().unwrap();
        assert!((wlo + 1.0 / 3.0).abs() < 1e-9);
        assert!((whi - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn ghz_projections_are_degenerate() {
        let region = feasible_region(&ghz_spec()).unwrap();
        let (lo, hi) = project_interval(&region, Component::EAB).unwrap().unwrap();
        assert!((lo - 1.0).abs() < 1e-9 && (hi - 1.0).abs() < 1e-9);
        let (lo, hi) = project_interval(&region, Component::EABC).unwrap().unwrap();
        assert!(lo.abs() < 1e-9 && hi.abs() < 1e-9);
    }

    #[test]
    fn project_interval_errors_and_empty() {
        let region = feasible_region(&ghz_spec()).unwrap();
        assert_eq!(
            project_interval(&region, Component::EA).unwrap_err(),
            FeasibilityError::ComponentNotFree(Component::EA)
        );
        let mut spec = ghz_spec();
        spec.e_ab = Constraint::Fixed(0.0);
        let empty = feasible_region(&spec).unwrap();
        assert_eq!(project_interval(&empty, Component::EABC).unwrap(), None);
    }

    #[test]
    fn max_min_probability_ghz_condition2() {
        let mut spec = ghz_spec();
        spec.e_ab = Constraint::Fixed(0.0);
        let (value, point) = max_min_probability(&spec).unwrap();
        assert!((value + 0.125).abs() < 1e-9, "value {value}");
        assert!(point[0].abs() < 1e-9, "argpoint {point:?}");
    }

    #[test]
    fn max_min_probability_feasible_cases() {
        let (value, _) = max_min_probability(&ghz_spec()).unwrap();
        assert!(value.abs() < 1e-9);

        let all_free = ConstraintSpec {
            e_a: Constraint::Free,
            e_b: Constraint::Free,
            e_c: Constraint::Free,
            e_ab: Constraint::Free,
            e_ac: Constraint::Free,
            e_bc: Constraint::Free,
            e_abc: Constraint::Free,
        };
        let (value, point) = max_min_probability(&all_free).unwrap();
        assert!((value - 0.125).abs() < 1e-9);
        for x in point {
            assert!(x.abs() < 1e-9);
        }
    }

    #[test]
    fn max_min_value_certifies_emptiness() {
        for (spec, expect_empty) in [
            (ghz_spec(), false),
            (w_spec(), false),
            (
                {
                    let mut s = ghz_spec();
                    s.e_ab = Constraint::Fixed(0.0);
                    s
                },
                true,
            ),
            (
                {
                    let mut s = w_spec();
                    s.e_ab = Constraint::Fixed(0.0);
                    s
                },
                true,
            ),
        ] {
            let region = feasible_region(&spec).unwrap();
            let (value, _) = max_min_probability(&spec).unwrap();
            assert_eq!(region.empty, value < -FEAS_TOL);
            assert_eq!(region.empty, expect_empty);
        }
    }

    #[test]
    fn too_many_free_components_is_rejected() {
        let mut spec = ghz_spec();
        spec.e_a = Constraint::Free;
        spec.e_b = Constraint::Free;
        assert_eq!(
            feasible_region(&spec).unwrap_err(),
            FeasibilityError::TooManyFreeComponents(4)
        );
    }

    #[test]
    fn fixed_value_out_of_range_is_rejected() {
        let mut spec = ghz_spec();
        spec.e_ac = Constraint::Fixed(1.5);
        assert!(matches!(
            feasible_region(&spec),
            Err(FeasibilityError::FixedValueOutOfRange { .. })
        ));
    }

    #[test]
    fn product_constraint_resolution() {
        let mut spec = ghz_spec();
        spec.e_ab = Constraint::Product;
        // Singles are zero, so the product pins e_ab to 0: empty region.
        let region = feasible_region(&spec).unwrap();
        assert!(region.empty);
        assert_eq!(region.free, vec![Component::EABC]);

        let mut bad = ghz_spec();
        bad.e_a = Constraint::Free;
        bad.e_ab = Constraint::Product;
        assert_eq!(
            feasible_region(&bad).unwrap_err(),
            FeasibilityError::ProductRequiresFixedSingles(Component::EAB)
        );

        let mut non_pair = ghz_spec();
        non_pair.e_abc = Constraint::Product;
        assert_eq!(
            feasible_region(&non_pair).unwrap_err(),
            FeasibilityError::ProductOnNonPair(Component::EABC)
        );
    }

    #[test]
    fn region_vertices_yield_valid_tensors() {
        for spec in [ghz_spec(), w_spec()] {
            let region = feasible_region(&spec).unwrap();
            for v in &region.vertices {
                let mut t = CorrelationTensor::zero();
                for c in Component::ALL {
                    if let Some(value) = spec.resolved_value(c) {
                        t.set(c, value);
                    }
                }
                for (c, x) in region.free.iter().zip(v) {
                    t.set(*c, *x);
                }
                assert!(is_valid(&t, FEAS_TOL));
            }
        }
    }

    #[test]
    fn visibility_ghz_is_pinned_to_one() {
        let (v_min, v_max) = visibility_range(&ghz_qm_tensor(), Component::EAB).unwrap();
        assert!((v_min - 1.0).abs() < 1e-6, "v_min {v_min}");
        assert_eq!(v_max, 1.0);
        assert_eq!(visibility_max(&ghz_qm_tensor(), Component::EAB).unwrap(), 1.0);
    }

    #[test]
    fn visibility_w_threshold_is_one_half() {
        let (v_min, v_max) = visibility_range(&w_qm_tensor(), Component::EAB).unwrap();
        assert!((v_min - 0.5).abs() < 1e-6, "v_min {v_min}");
        assert_eq!(v_max, 1.0);
    }

    #[test]
    fn visibility_zero_qm_value_is_rejected() {
        let mut t = ghz_qm_tensor();
        t.e_ab = 0.0;
        assert_eq!(
            visibility_range(&t, Component::EAB).unwrap_err(),
            FeasibilityError::ZeroQMValue(Component::EAB)
        );
    }
}
