//! Two-axis threshold sweeps: the grid itself, its CSV table, and the
//! phase-diagram SVG with the region band shaded and the trigger curves
//! overlaid.

use super::config::{apply_axis, RunConfig, SweepAxis};
use super::portable::fmt_f64;
use super::svg::{Frame, SvgCanvas};
use crate::model::{classify_region, Region, ThresholdSet};

pub struct SweepCell {
    pub x: f64,
    pub y: f64,
    pub thresholds: ThresholdSet,
    pub region: Region,
}

pub struct SweepGrid {
    pub x: SweepAxis,
    pub y: SweepAxis,
    pub annotate: Option<[f64; 2]>,
    /// Row-major with x outermost: cell (i, j) sits at i * y.steps + j.
    pub cells: Vec<SweepCell>,
}

/// Evaluates thresholds and region at every grid node. A node whose
/// coordinates violate a parameter range is a configuration error; axis
/// ranges are expected to stay inside the model's domain.
pub fn build_grid(config: &RunConfig) -> Result<SweepGrid, String> {
    let xs = config.sweep.x.grid();
    let ys = config.sweep.y.grid();
    let mut cells = Vec::with_capacity(xs.len() * ys.len());
    for &x in &xs {
        for &y in &ys {
            let mut params = config.params;
            let mut beliefs = config.beliefs;
            let mut value = config.value;
            apply_axis(&config.sweep.x.name, x, &mut params, &mut beliefs, &mut value);
            apply_axis(&config.sweep.y.name, y, &mut params, &mut beliefs, &mut value);
            let at = |e: &dyn std::fmt::Display| format!("sweep cell ({x}, {y}): {e}");
            params.validate().map_err(|e| at(&e))?;
            let state = beliefs.to_state().map_err(|e| at(&e))?;
            let thresholds = ThresholdSet::compute(&state, &params, config.include_private)
                .map_err(|e| at(&e))?;
            let label = classify_region(value, state.pi_self, &params, config.include_private)
                .map_err(|e| at(&e))?;
            cells.push(SweepCell {
                x,
                y,
                thresholds,
                region: label.region,
            });
        }
    }
    Ok(SweepGrid {
        x: config.sweep.x.clone(),
        y: config.sweep.y.clone(),
        annotate: config.sweep.annotate,
        cells,
    })
}

pub fn sweep_csv(grid: &SweepGrid) -> String {
    let mut out = String::with_capacity(grid.cells.len() * 64);
    out.push_str(&format!(
        "{},{},v_preempt,v_survival,v_nuclear,v_saviour,immediate_deploy,v_liability,region\n",
        grid.x.name, grid.y.name
    ));
    for c in &grid.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(c.x),
            fmt_f64(c.y),
            fmt_f64(c.thresholds.v_preempt),
            fmt_f64(c.thresholds.v_survival),
            fmt_f64(c.thresholds.v_nuclear),
            fmt_f64(c.thresholds.v_saviour),
            c.thresholds.immediate_deploy,
            fmt_f64(c.thresholds.v_liability),
            c.region.as_str(),
        ));
    }
    out
}

fn region_color(r: Region) -> &'static str {
    match r {
        Region::RaceViable => "#b6d7a8",
        Region::SuicideRegion => "#f6b26b",
        Region::ProfitableWait => "#a4c2f4",
        Region::WaitBelowAll => "#efefef",
    }
}

const PREEMPT_COLOR: &str = "#cc0000";
const SURVIVAL_COLOR: &str = "#38761d";

/// Threshold curve over the x axis, clamped into the frame; nodes without a
/// finite threshold are skipped.
fn curve(grid: &SweepGrid, frame: &Frame, pick: impl Fn(&ThresholdSet) -> f64) -> Vec<(f64, f64)> {
    let ny = grid.y.steps as usize;
    grid.cells
        .iter()
        .step_by(ny)
        .filter_map(|c| {
            let v = pick(&c.thresholds);
            v.is_finite()
                .then(|| (frame.px(c.x), frame.py(v.clamp(frame.y0, frame.y1))))
        })
        .collect()
}

pub fn sweep_svg(grid: &SweepGrid) -> String {
    let (width, height) = (720.0, 560.0);
    let frame = Frame {
        x0: grid.x.min,
        x1: grid.x.max,
        y0: grid.y.min,
        y1: grid.y.max,
        left: 70.0,
        top: 70.0,
        w: 620.0,
        h: 420.0,
    };
    let bottom = frame.top + frame.h;
    let right = frame.left + frame.w;
    let mut svg = SvgCanvas::new(width, height);
    svg.rect(0.0, 0.0, width, height, "#ffffff");

    // Region tiles, centered on the grid nodes and clipped at the edges.
    let step_x = frame.w / (grid.x.steps - 1) as f64;
    let step_y = frame.h / (grid.y.steps - 1) as f64;
    for c in &grid.cells {
        let cx = frame.px(c.x);
        let cy = frame.py(c.y);
        let x_lo = (cx - step_x / 2.0).max(frame.left);
        let x_hi = (cx + step_x / 2.0).min(right);
        let y_lo = (cy - step_y / 2.0).max(frame.top);
        let y_hi = (cy + step_y / 2.0).min(bottom);
        svg.rect(x_lo, y_lo, x_hi - x_lo, y_hi - y_lo, region_color(c.region));
    }

    // Trigger curves only make sense against a prize-level axis.
    if grid.y.name == "value" {
        let preempt = curve(grid, &frame, |t| t.v_preempt);
        let survival = curve(grid, &frame, |t| t.v_survival);
        svg.polyline(&preempt, PREEMPT_COLOR, 2.0, Some("7,5"));
        svg.polyline(&survival, SURVIVAL_COLOR, 2.0, None);
        if let Some(&(x, y)) = preempt.last() {
            svg.text(x, y - 7.0, 12.0, "end", PREEMPT_COLOR, "v_preempt");
        }
        if let Some(&(x, y)) = survival.last() {
            svg.text(x, y - 7.0, 12.0, "end", SURVIVAL_COLOR, "v_survival");
        }
    }

    svg.frame(frame.left, frame.top, frame.w, frame.h, "#000000");

    // Five ticks per axis, ends included.
    for k in 0..5 {
        let tx = grid.x.min + (grid.x.max - grid.x.min) * k as f64 / 4.0;
        let px = frame.px(tx);
        svg.line(px, bottom, px, bottom + 4.0, "#000000", 1.0);
        svg.text(px, bottom + 18.0, 11.0, "middle", "#000000", &fmt_f64(tx));
        let ty = grid.y.min + (grid.y.max - grid.y.min) * k as f64 / 4.0;
        let py = frame.py(ty);
        svg.line(frame.left - 4.0, py, frame.left, py, "#000000", 1.0);
        svg.text(frame.left - 8.0, py + 4.0, 11.0, "end", "#000000", &fmt_f64(ty));
    }
    svg.text(
        frame.left + frame.w / 2.0,
        bottom + 40.0,
        13.0,
        "middle",
        "#000000",
        &grid.x.name,
    );
    svg.text(frame.left, frame.top - 8.0, 13.0, "start", "#000000", &grid.y.name);

    if let Some([ax, ay]) = grid.annotate {
        let (px, py) = (frame.px(ax), frame.py(ay));
        svg.circle(px, py, 4.0, "#000000");
        svg.text(
            px + 8.0,
            py - 8.0,
            12.0,
            "start",
            "#000000",
            &format!("({}, {})", fmt_f64(ax), fmt_f64(ay)),
        );
    }

    svg.text(
        frame.left,
        24.0,
        15.0,
        "start",
        "#000000",
        &format!("deployment regions: {} by {}", grid.y.name, grid.x.name),
    );
    let legend = [
        Region::SuicideRegion,
        Region::RaceViable,
        Region::ProfitableWait,
        Region::WaitBelowAll,
    ];
    for (k, r) in legend.iter().enumerate() {
        let x = frame.left + 150.0 * k as f64;
        svg.rect(x, 38.0, 12.0, 12.0, region_color(*r));
        svg.text(x + 17.0, 48.0, 11.0, "start", "#000000", r.as_str());
    }
    svg.finish()
}
