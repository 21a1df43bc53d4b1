//! Minimal SVG output: the graph of an element, or a rug of orbit points.
//! Infinite domains are drawn through `t ↦ t / (1 + |t|)`.

use coherent::dynamics::OrbitSample;
use coherent::rational::to_f64;
use coherent::{ExtPoint, GroupSpec, PiecewiseMap};

const SIZE: f64 = 400.0;
const MARGIN: f64 = 20.0;
const SAMPLES: usize = 800;

struct Frame {
    lo: f64,
    hi: f64,
    squash: bool,
}

impl Frame {
    fn of(spec: &GroupSpec) -> Frame {
        match (spec.domain.inf(), spec.domain.sup()) {
            (ExtPoint::Finite(a), ExtPoint::Finite(b)) => Frame {
                lo: to_f64(&a),
                hi: to_f64(&b),
                squash: false,
            },
            _ => Frame {
                lo: -1.0,
                hi: 1.0,
                squash: true,
            },
        }
    }

    fn to_unit(&self, t: f64) -> f64 {
        let t = if self.squash { t / (1.0 + t.abs()) } else { t };
        (t - self.lo) / (self.hi - self.lo)
    }

    fn unit_to_value(&self, u: f64) -> f64 {
        let s = self.lo + u * (self.hi - self.lo);
        if self.squash {
            s / (1.0 - s.abs())
        } else {
            s
        }
    }
}

fn px(u: f64) -> f64 {
    MARGIN + u * SIZE
}

fn py(u: f64) -> f64 {
    MARGIN + (1.0 - u) * SIZE
}

fn document(body: &str, title: &str) -> String {
    let full = SIZE + 2.0 * MARGIN;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{full}\" height=\"{full}\" viewBox=\"0 0 {full} {full}\">\n\
         <title>{}</title>\n\
         <rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"none\" stroke=\"#888\"/>\n{body}</svg>\n",
        escape(title)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn graph(spec: &GroupSpec, f: &PiecewiseMap, title: &str) -> String {
    let frame = Frame::of(spec);
    let diagonal = format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ccc\"/>\n",
        px(0.0),
        py(0.0),
        px(1.0),
        py(1.0)
    );
    let mut path = String::new();
    for i in 1..SAMPLES {
        let u = i as f64 / SAMPLES as f64;
        let x = frame.unit_to_value(u);
        let y = eval_f64(f, x);
        let cmd = if path.is_empty() { 'M' } else { 'L' };
        path.push_str(&format!("{cmd}{:.2},{:.2} ", px(u), py(frame.to_unit(y))));
    }
    document(
        &format!("{diagonal}<path d=\"{}\" fill=\"none\" stroke=\"#c33\"/>\n", path.trim_end()),
        title,
    )
}

/// Floating-point evaluation for drawing only.
fn eval_f64(f: &PiecewiseMap, x: f64) -> f64 {
    let piece = f
        .pieces()
        .iter()
        .find(|p| p.right.to_f64() >= x)
        .unwrap_or_else(|| f.pieces().last().expect("nonempty"));
    piece.map.eval_f64(x)
}

pub fn rug(spec: &GroupSpec, sample: &OrbitSample) -> String {
    let frame = Frame::of(spec);
    let ticks: String = sample
        .points
        .iter()
        .map(|p| {
            let x = px(frame.to_unit(to_f64(p)));
            format!("<line x1=\"{x:.2}\" y1=\"{}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"#36c\"/>\n", py(0.6), py(0.4))
        })
        .collect();
    document(&ticks, &format!("orbit depth {}", sample.depth))
}
