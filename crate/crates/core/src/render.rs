//! Generation diagrams `F_0 ⊇ F_1 ⊇ ...`.
//!
//! Level `k` is the union of the boxes `Σ_{m<=k} d_m β^m + β^k F_0` with
//! `F_0 = [γ β/(1-β), λ β/(1-β)]` for the global digit bounds `γ, λ`. This is
//! the figure-friendly cover; [`attractor_cover`](crate::cover::attractor_cover)
//! uses the tighter per-position tails and is the one used for verification.

use std::fmt::Write as _;

use num_traits::One;

use crate::cover::{prefix_box_cover, IntervalCover, DEFAULT_MAX_CYLINDERS};
use crate::error::{Error, Result};
use crate::rational::{int, pow, to_decimal, Rational};
use crate::system::CantorSystem;

const SVG_PLACES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generations {
    pub levels: Vec<IntervalCover>,
}

impl Generations {
    /// `F_0` as `(min, max)`.
    pub fn frame(&self) -> (Rational, Rational) {
        let top = &self.levels[0];
        (top.min().expect("F_0 nonempty"), top.max().expect("F_0 nonempty"))
    }
}

/// `F_0, ..., F_n`.
pub fn generations(system: &CantorSystem, n: usize) -> Result<Generations> {
    generations_with_limit(system, n, DEFAULT_MAX_CYLINDERS)
}

pub fn generations_with_limit(system: &CantorSystem, n: usize, limit: usize) -> Result<Generations> {
    let (gamma, lambda) = system.global_bounds();
    let beta = system.beta();
    let unit = beta / (Rational::one() - beta);
    let levels = (0..=n)
        .map(|k| {
            let scale = &unit * pow(beta, k);
            let lo = int(gamma) * &scale;
            let hi = int(lambda) * &scale;
            prefix_box_cover(system, k, &lo, &hi, limit)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Generations { levels })
}

/// SVG 1.1 document with one row of bars per level, `F_0` on top spanning
/// the full width.
pub fn render_svg(gens: &Generations, width_px: u32, row_height_px: u32) -> String {
    let (min, max) = gens.frame();
    let extent = &max - &min;
    let width = int(width_px.into());
    let x = |v: &Rational| -> Rational {
        if extent == int(0) {
            int(0)
        } else {
            (v - &min) / &extent * &width
        }
    };
    let rows = gens.levels.len() as u32;
    let height = row_height_px * (2 * rows).saturating_sub(1).max(1);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width_px}" height="{height}" viewBox="0 0 {width_px} {height}">"#
    )
    .unwrap();
    for (k, level) in gens.levels.iter().enumerate() {
        let y = 2 * row_height_px * k as u32;
        for iv in level.intervals() {
            let (x0, x1) = if extent == int(0) { (int(0), width.clone()) } else { (x(&iv.lo), x(&iv.hi)) };
            writeln!(
                out,
                r#"  <rect x="{}" y="{y}" width="{}" height="{row_height_px}" fill="black"/>"#,
                to_decimal(&x0, SVG_PLACES),
                to_decimal(&(&x1 - &x0), SVG_PLACES),
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

/// ASCII rendering over `F_0` split into `columns` equal cells; a cell shows
/// `#` when its midpoint lies in the level.
pub fn render_text(gens: &Generations, columns: usize) -> Result<String> {
    if columns < 10 {
        return Err(Error::TooSmall("columns", 10));
    }
    let (min, max) = gens.frame();
    let cells = int(columns as i64);
    let mut out = String::new();
    for level in &gens.levels {
        for c in 0..columns {
            let mid = &min + (&max - &min) * Rational::new((2 * c + 1).into(), 2.into()) / &cells;
            out.push(if level.contains(&mid) { '#' } else { '.' });
        }
        out.push('\n');
    }
    Ok(out)
}
