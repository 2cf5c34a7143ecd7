//! Exact rational convex hulls: vertex extraction and membership by a
//! phase-one simplex feasibility test with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Point = Vec<BigRational>;

/// Rank over `Q` of a list of row vectors.
pub fn rational_rank(rows: &[Point]) -> usize {
    let mut a: Vec<Point> = rows.to_vec();
    let n = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let piv = a[rank][col].clone();
        for i in 0..a.len() {
            if i != rank && !a[i][col].is_zero() {
                let f = &a[i][col] / &piv;
                for j in col..n {
                    let v = &f * &a[rank][j];
                    a[i][j] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of the affine span of a nonempty point set.
pub fn affine_dimension(points: &[Point]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<Point> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    rational_rank(&diffs)
}

/// Whether `p` is a convex combination of `points`.
pub fn in_convex_hull(points: &[Point], p: &Point) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = points.len();
    let d = p.len();
    let rows = d + 1;
    // Constraints: Σ λ_i q_i = p, Σ λ_i = 1, λ >= 0; artificial a_r per row.
    let width = n + rows + 1;
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(rows + 1);
    for r in 0..rows {
        let mut row = vec![BigRational::zero(); width];
        for (i, q) in points.iter().enumerate() {
            row[i] = if r < d { q[r].clone() } else { BigRational::one() };
        }
        row[width - 1] = if r < d { p[r].clone() } else { BigRational::one() };
        if row[width - 1].is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[n + r] = BigRational::one();
        tab.push(row);
    }
    // objective: minimise Σ a_r, reduced costs = -Σ rows on non-artificials
    let mut obj = vec![BigRational::zero(); width];
    for row in &tab {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    tab.push(obj);
    let mut basis: Vec<usize> = (n..n + rows).collect();
    loop {
        let Some(enter) = (0..n + rows).find(|&j| tab[rows][j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..rows {
            if tab[r][enter].is_positive() {
                let ratio = &tab[r][width - 1] / &tab[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((lr, _)) = leave else {
            break;
        };
        let piv = tab[lr][enter].clone();
        for x in tab[lr].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = tab[lr].clone();
        for (r, row) in tab.iter_mut().enumerate() {
            if r != lr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        basis[lr] = enter;
    }
    tab[rows][width - 1].is_zero()
}

/// Indices of the vertices of the convex hull of `points` (duplicates are
/// represented by their first occurrence).
pub fn hull_vertices(points: &[Point]) -> Vec<usize> {
    let mut distinct: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if !distinct.iter().any(|&j| points[j] == *p) {
            distinct.push(i);
        }
    }
    distinct
        .iter()
        .copied()
        .filter(|&i| {
            let others: Vec<Point> = distinct
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| points[j].clone())
                .collect();
            !in_convex_hull(&others, &points[i])
        })
        .collect()
}
