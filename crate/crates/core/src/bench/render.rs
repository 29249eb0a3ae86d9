use std::fmt::Write;

use crate::tensor::Tensor3;
use crate::workspace::{Environment, JointLimit};

/// Longest side of the rendered image in pixels.
const IMAGE_SIZE: f64 = 512.0;

/// Optional layers drawn over the obstacles, bottom to top.
#[derive(Clone, Debug, Default)]
pub struct Overlays {
    /// Row-major per-cell criticality; drawn as red with relative opacity.
    pub criticality: Option<Vec<f64>>,
    /// Per-cell dominant heading; horizontal cells blue, vertical green.
    pub headings: Option<Vec<Option<f64>>>,
    /// Base positions of a plan.
    pub plan: Option<Vec<(f64, f64)>>,
    pub start: Option<(f64, f64)>,
    pub goal: Option<(f64, f64)>,
}

/// Center of the most probable heading bin for every cell with positive
/// criticality. `probs` is a probability view with the heading group first.
pub fn dominant_headings(probs: &Tensor3<f64>, p: usize, limit: JointLimit) -> Vec<Option<f64>> {
    let n = probs.n();
    let mut out = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let v = probs.cell(r, c);
            if !(v[0] > 0.0) || v.len() < 1 + p {
                out.push(None);
                continue;
            }
            let mut best = 0;
            for b in 1..p {
                if v[1 + b] > v[1 + best] {
                    best = b;
                }
            }
            out.push(Some(limit.lo + limit.width() * (best as f64 + 0.5) / p as f64));
        }
    }
    out
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// SVG with the world's origin at the bottom-left.
pub fn render_svg(env: &Environment, overlays: &Overlays) -> String {
    let scale = IMAGE_SIZE / env.width.max(env.height);
    let w = env.width * scale;
    let h = env.height * scale;
    let px = |x: f64| num(x * scale);
    let py = |y: f64| num((env.height - y) * scale);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        num(w),
        num(h),
        num(w),
        num(h)
    );
    let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>", num(w), num(h));
    let n = env.n_d;
    let cell = |r: usize, c: usize| env.cell_rect(r, c);
    if let Some(crit) = &overlays.criticality {
        let max = crit.iter().copied().filter(|v| v.is_finite()).fold(0.0, f64::max);
        if max > 0.0 {
            let _ = writeln!(s, "<g id=\"criticality\">");
            for (i, &v) in crit.iter().enumerate().take(n * n) {
                if !(v > 0.0) {
                    continue;
                }
                let rc = cell(i / n, i % n);
                let _ = writeln!(
                    s,
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"red\" fill-opacity=\"{}\"/>",
                    px(rc.xmin),
                    py(rc.ymax),
                    num((rc.xmax - rc.xmin) * scale),
                    num((rc.ymax - rc.ymin) * scale),
                    num(v / max)
                );
            }
            let _ = writeln!(s, "</g>");
        }
    }
    if let Some(hs) = &overlays.headings {
        let _ = writeln!(s, "<g id=\"headings\">");
        for (i, h) in hs.iter().enumerate().take(n * n) {
            let Some(theta) = h else { continue };
            let color = if theta.cos().abs() >= theta.sin().abs() { "blue" } else { "green" };
            let rc = cell(i / n, i % n);
            let _ = writeln!(
                s,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{color}\" fill-opacity=\"0.500\"/>",
                px(rc.xmin),
                py(rc.ymax),
                num((rc.xmax - rc.xmin) * scale),
                num((rc.ymax - rc.ymin) * scale)
            );
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, "<g id=\"obstacles\">");
    for o in &env.obstacles {
        let _ = writeln!(
            s,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"black\"/>",
            px(o.xmin),
            py(o.ymax),
            num((o.xmax - o.xmin) * scale),
            num((o.ymax - o.ymin) * scale)
        );
    }
    let _ = writeln!(s, "</g>");
    if let Some(plan) = &overlays.plan {
        let pts: Vec<String> = plan.iter().map(|&(x, y)| format!("{},{}", px(x), py(y))).collect();
        let _ = writeln!(
            s,
            "<polyline id=\"plan\" points=\"{}\" fill=\"none\" stroke=\"orange\" stroke-width=\"2\"/>",
            pts.join(" ")
        );
    }
    for (id, pt, color) in [("start", overlays.start, "green"), ("goal", overlays.goal, "blue")] {
        if let Some((x, y)) = pt {
            let _ = writeln!(s, "<circle id=\"{id}\" cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"{color}\"/>", px(x), py(y));
        }
    }
    s.push_str("</svg>\n");
    s
}

const CURVE_COLORS: [&str; 7] = ["black", "red", "blue", "green", "orange", "purple", "teal"];

/// Solved fraction against log time, one polyline per planner.
pub fn render_curves_svg(summary: &super::BenchmarkSummary) -> String {
    let (w, h, m) = (640.0, 400.0, 40.0);
    let grid = &summary.time_grid;
    let (t0, t1) = match (grid.first(), grid.last()) {
        (Some(&a), Some(&b)) if a > 0.0 && b > a => (a.ln(), b.ln()),
        _ => (0.0, 1.0),
    };
    let x = |t: f64| m + (w - 2.0 * m) * if t > 0.0 { (t.ln() - t0) / (t1 - t0) } else { 0.0 };
    let y = |f: f64| h - m - (h - 2.0 * m) * f;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        num(w),
        num(h),
        num(w),
        num(h)
    );
    let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>", num(w), num(h));
    let _ = writeln!(
        s,
        "<path d=\"M{},{} L{},{} L{},{}\" fill=\"none\" stroke=\"gray\"/>",
        num(m),
        num(m),
        num(m),
        num(h - m),
        num(w - m),
        num(h - m)
    );
    for (i, p) in summary.planners.iter().enumerate() {
        let color = CURVE_COLORS[i % CURVE_COLORS.len()];
        let pts: Vec<String> = p.curve.iter().map(|&(t, f)| format!("{},{}", num(x(t)), num(y(f)))).collect();
        let _ = writeln!(
            s,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
            pts.join(" ")
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{}</text>",
            num(m + 10.0),
            num(m + 14.0 * (i as f64 + 1.0)),
            p.planner
        );
    }
    s.push_str("</svg>\n");
    s
}
