//! Enclosing balls by Ritter's two-pass method.
//!
//! The result always contains the input. Its radius is at most twice the
//! optimum: the initial centre lies within `r_opt` of the optimal centre, so
//! every point is within `2·r_opt` of it and growing never exceeds that.

use crate::error::{Error, Result};
use crate::procmodel::{distance, Ball};

fn farthest<'a>(from: &[f64], points: &[&'a [f64]]) -> &'a [f64] {
    let mut best = points[0];
    let mut best_d = -1.0;
    for &p in points {
        let d = distance(from, p);
        if d > best_d {
            best_d = d;
            best = p;
        }
    }
    best
}

fn ritter(points: &[&[f64]]) -> Ball {
    let y = farthest(points[0], points);
    let z = farthest(y, points);
    let mut center: Vec<f64> = y.iter().zip(z).map(|(a, b)| 0.5 * (a + b)).collect();
    let mut radius = 0.5 * distance(y, z);
    for &p in points {
        let d = distance(&center, p);
        if d > radius {
            let grown = 0.5 * (radius + d);
            let shift = (d - grown) / d;
            for (c, v) in center.iter_mut().zip(p) {
                *c += (v - *c) * shift;
            }
            radius = grown;
        }
    }
    // rounding can leave a point a hair outside
    let reach = points
        .iter()
        .map(|p| distance(&center, p))
        .fold(0.0, f64::max);
    Ball::new(center, radius.max(reach))
}

/// A ball containing every point.
pub fn bounding_ball(points: &[Vec<f64>]) -> Result<Ball> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
    Ok(ritter(&refs))
}

/// A ball containing every input ball: Ritter on the centres, then the radius
/// grown to reach the far side of each member.
pub fn bounding_ball_of_balls(balls: &[Ball]) -> Result<Ball> {
    if balls.is_empty() {
        return Err(Error::EmptySet);
    }
    if balls.len() == 1 {
        return Ok(balls[0].clone());
    }
    let refs: Vec<&[f64]> = balls.iter().map(|b| b.center.as_slice()).collect();
    let core = ritter(&refs);
    let radius = balls
        .iter()
        .map(|b| distance(&core.center, &b.center) + b.radius)
        .fold(0.0, f64::max);
    Ok(Ball::new(core.center, radius))
}
