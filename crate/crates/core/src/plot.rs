//! Two-color renderings of completion arrays as SVG or binary PGM.

use std::fmt::Write;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tripod::CompletionArray;

const RED_SVG: &str = "#c8102e";
const BLUE_SVG: &str = "#1f4e9c";
const RED_GRAY: u8 = 64;
const BLUE_GRAY: u8 = 192;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlotError {
    #[error("window reaches row or column {needed} but the array for center {center} has dim {dim}")]
    WindowTooLarge { center: u32, needed: usize, dim: usize },
    #[error("expected an array for center {0}")]
    MissingArray(u32),
}

/// What makes a cell red.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotKind {
    /// The two centers give the same completion.
    Compare { c1: u32, c2: u32 },
    /// The completion is at most `vmax`.
    Band { center: u32, vmax: u32 },
    /// The tripod with leaves `(a, b, leaf)` is a P position.
    PPositions { center: u32, leaf: u32 },
}

impl PlotKind {
    pub fn centers(&self) -> Vec<u32> {
        match *self {
            PlotKind::Compare { c1, c2 } => vec![c1, c2],
            PlotKind::Band { center, .. } | PlotKind::PPositions { center, .. } => vec![center],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageFormat {
    Svg,
    Pgm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotSpec {
    pub kind: PlotKind,
    pub rows: Range<usize>,
    pub cols: Range<usize>,
}

impl PlotSpec {
    /// Smallest array dim that covers the window.
    pub fn required_dim(&self) -> usize {
        self.rows.end.max(self.cols.end)
    }
}

fn find<'a>(arrays: &[&'a CompletionArray], center: u32, spec: &PlotSpec) -> Result<&'a CompletionArray, PlotError> {
    let arr = arrays.iter().find(|a| a.center() == center).ok_or(PlotError::MissingArray(center))?;
    let needed = spec.required_dim();
    if !spec.rows.is_empty() && !spec.cols.is_empty() && needed > arr.dim() {
        return Err(PlotError::WindowTooLarge { center, needed, dim: arr.dim() });
    }
    Ok(arr)
}

/// Red/blue mask over the window, row-major.
pub fn plot_mask(spec: &PlotSpec, arrays: &[&CompletionArray]) -> Result<Vec<bool>, PlotError> {
    let red: Box<dyn Fn(usize, usize) -> bool> = match spec.kind {
        PlotKind::Compare { c1, c2 } => {
            let (x, y) = (find(arrays, c1, spec)?, find(arrays, c2, spec)?);
            Box::new(move |a, b| x.get(a, b) == y.get(a, b))
        }
        PlotKind::Band { center, vmax } => {
            let x = find(arrays, center, spec)?;
            Box::new(move |a, b| x.get(a, b) <= vmax)
        }
        PlotKind::PPositions { center, leaf } => {
            let x = find(arrays, center, spec)?;
            Box::new(move |a, b| x.get(a, b) == leaf)
        }
    };
    Ok(spec.rows.clone().flat_map(|a| spec.cols.clone().map(move |b| (a, b))).map(|(a, b)| red(a, b)).collect())
}

/// Render the plot; one SVG rect or one PGM pixel per cell.
pub fn emit_plot(spec: &PlotSpec, arrays: &[&CompletionArray], format: ImageFormat) -> Result<Vec<u8>, PlotError> {
    let mask = plot_mask(spec, arrays)?;
    let (w, h) = (spec.cols.len(), spec.rows.len());
    Ok(match format {
        ImageFormat::Pgm => {
            let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
            out.extend(mask.iter().map(|&r| if r { RED_GRAY } else { BLUE_GRAY }));
            out
        }
        ImageFormat::Svg => {
            let mut s = format!(
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
                 viewBox=\"0 0 {w} {h}\" shape-rendering=\"crispEdges\">\n"
            );
            for (i, &r) in mask.iter().enumerate() {
                let fill = if r { RED_SVG } else { BLUE_SVG };
                writeln!(s, "<rect x=\"{}\" y=\"{}\" width=\"1\" height=\"1\" fill=\"{fill}\"/>", i % w, i / w).unwrap();
            }
            s.push_str("</svg>\n");
            s.into_bytes()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tripod::generate_array;

    #[test]
    fn pgm_layout() {
        let arr = generate_array(6, 8);
        let spec = PlotSpec { kind: PlotKind::Band { center: 6, vmax: 0 }, rows: 1..3, cols: 1..4 };
        let img = emit_plot(&spec, &[&arr], ImageFormat::Pgm).unwrap();
        // (1,1) and (2,2) hold 0
        assert_eq!(img, b"P5\n3 2\n255\n\x40\xc0\xc0\xc0\x40\xc0".to_vec());
    }

    #[test]
    fn empty_window() {
        let arr = generate_array(2, 4);
        let spec = PlotSpec { kind: PlotKind::PPositions { center: 2, leaf: 3 }, rows: 0..0, cols: 0..0 };
        assert_eq!(emit_plot(&spec, &[&arr], ImageFormat::Pgm).unwrap(), b"P5\n0 0\n255\n".to_vec());
        let svg = String::from_utf8(emit_plot(&spec, &[&arr], ImageFormat::Svg).unwrap()).unwrap();
        assert!(!svg.contains("<rect"));
    }

    #[test]
    fn window_and_center_checks() {
        let arr = generate_array(2, 16);
        let big = PlotSpec { kind: PlotKind::Band { center: 2, vmax: 6 }, rows: 0..17, cols: 0..4 };
        assert_eq!(
            emit_plot(&big, &[&arr], ImageFormat::Svg),
            Err(PlotError::WindowTooLarge { center: 2, needed: 17, dim: 16 })
        );
        let cmp = PlotSpec { kind: PlotKind::Compare { c1: 2, c2: 5 }, rows: 0..4, cols: 0..4 };
        assert_eq!(emit_plot(&cmp, &[&arr], ImageFormat::Svg), Err(PlotError::MissingArray(5)));
    }

    #[test]
    fn svg_has_one_rect_per_cell() {
        let (x, y) = (generate_array(2, 32), generate_array(5, 32));
        let spec = PlotSpec { kind: PlotKind::Compare { c1: 2, c2: 5 }, rows: 0..32, cols: 0..32 };
        let svg = String::from_utf8(emit_plot(&spec, &[&x, &y], ImageFormat::Svg).unwrap()).unwrap();
        assert_eq!(svg.matches("<rect").count(), 1024);
    }
}
