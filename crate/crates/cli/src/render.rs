//! Standalone SVG output for fences, fans, probes, bends, regions and
//! rectangle realizations.
//!
//! Every coordinate is the decimal expansion of an exact value to 20
//! significant digits, so renders are byte-stable across runs. The y axis
//! is flipped once at the root group to keep mathematical orientation.

use fencelab_core::algebra::Param;
use fencelab_core::chains::Rect;
use fencelab_core::geometry::{point_at, Point, SquaredRadius};
use fencelab_core::model::{ModelPayload, PolyArc};
use fencelab_core::pattern::RectRealization;
use fencelab_core::pierce::OpenRegion;
use fencelab_core::probe::{
    classify_target, ArcPos, Bend, CircleProbe, ComponentRef, EventKind, ProbeTarget,
};
use fencelab_core::scalar::Scalar;

const SIG: usize = 20;

/// A renderable scene.
pub struct Scene<'a> {
    pub model: &'a ModelPayload,
    pub probes: Vec<CircleProbe>,
    pub bends: Vec<Bend>,
    pub region: Option<&'a OpenRegion>,
    pub realization: Option<&'a RectRealization>,
}

fn dec(x: &Scalar) -> String {
    x.to_decimal(SIG)
}

/// Decimal square root of an exact squared radius, 20 significant digits.
fn dec_sqrt(r2: &Scalar) -> String {
    r2.sqrt_decimal(SIG)
}

fn param_point(arc: &PolyArc, pos: &ArcPos) -> (Scalar, Scalar) {
    let vs = arc.vertices();
    let (a, b) = (&vs[pos.seg], &vs[pos.seg + 1]);
    match &pos.t {
        Param::Rat(t) => {
            let p = point_at(a, b, t);
            (p.x, p.y)
        }
        t => {
            // refine far below display precision, then take the midpoint
            let narrow = Scalar::exp10(-30);
            let (lo, hi) = t.refined_bracket(&narrow);
            let mid = Scalar::midpoint(&lo, &hi);
            let p = point_at(a, b, &mid);
            (p.x, p.y)
        }
    }
}



struct Bounds {
    min_x: Scalar,
    min_y: Scalar,
    max_x: Scalar,
    max_y: Scalar,
}

impl Bounds {
    fn new() -> Bounds {
        Bounds {
            min_x: Scalar::from_int(i32::MAX as i64),
            min_y: Scalar::from_int(i32::MAX as i64),
            max_x: Scalar::from_int(i32::MIN as i64),
            max_y: Scalar::from_int(i32::MIN as i64),
        }
    }

    fn add(&mut self, x: &Scalar, y: &Scalar) {
        if *x < self.min_x {
            self.min_x = x.clone();
        }
        if *x > self.max_x {
            self.max_x = x.clone();
        }
        if *y < self.min_y {
            self.min_y = y.clone();
        }
        if *y > self.max_y {
            self.max_y = y.clone();
        }
    }

    fn add_circle(&mut self, c: &Point, r2: &SquaredRadius) {
        // enclose with the integer upper bound of the radius
        let r = Scalar::from_big(r2.value().int_sqrt_upper(), 1i64.into());
        self.add(&(&c.x - &r), &(&c.y - &r));
        self.add(&(&c.x + &r), &(&c.y + &r));
    }
}

pub fn render_svg(scene: &Scene<'_>) -> String {
    let target = match scene.model {
        ModelPayload::Fence(f) => ProbeTarget::from(f),
        ModelPayload::Fan(f) => ProbeTarget::from(f),
    };

    let mut bounds = Bounds::new();
    for arc in target.arcs() {
        for v in arc.vertices() {
            bounds.add(&v.x, &v.y);
        }
    }
    for p in target.points() {
        bounds.add(&p.x, &p.y);
    }
    for probe in &scene.probes {
        bounds.add_circle(&probe.center, &probe.r2);
    }
    if let Some(region) = scene.region {
        for b in region.balls() {
            bounds.add_circle(&b.center, &b.r2);
        }
    }
    if let Some(re) = scene.realization {
        bounds.add(&re.root.min.x, &re.root.min.y);
        bounds.add(&re.root.max.x, &re.root.max.y);
    }

    let pad = Scalar::ratio(1, 2);
    let min_x = &bounds.min_x - &pad;
    let min_y = &bounds.min_y - &pad;
    let max_x = &bounds.max_x + &pad;
    let max_y = &bounds.max_y + &pad;
    let width = &max_x - &min_x;
    let height = &max_y - &min_y;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        dec(&min_x),
        dec(&-&max_y),
        dec(&width),
        dec(&height)
    ));
    out.push_str("<g transform=\"scale(1,-1)\" fill=\"none\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n");

    // fence / fan components
    out.push_str("<g class=\"model\" stroke=\"#1a1a1a\" stroke-width=\"0.03\">\n");
    for arc in target.arcs() {
        let mut d = String::new();
        for (i, v) in arc.vertices().iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            d.push_str(&format!("{}{} {} ", cmd, dec(&v.x), dec(&v.y)));
        }
        out.push_str(&format!("<path d=\"{}\"/>\n", d.trim_end()));
    }
    for p in target.points() {
        out.push_str(&format!(
            "<circle class=\"isolated\" cx=\"{}\" cy=\"{}\" r=\"0.05\" fill=\"#1a1a1a\"/>\n",
            dec(&p.x),
            dec(&p.y)
        ));
    }
    out.push_str("</g>\n");

    // probe circles and region balls
    if !scene.probes.is_empty() || scene.region.is_some() {
        out.push_str("<g class=\"probes\" stroke=\"#4466cc\" stroke-width=\"0.02\">\n");
        for probe in &scene.probes {
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n",
                dec(&probe.center.x),
                dec(&probe.center.y),
                dec_sqrt(probe.r2.value())
            ));
        }
        if let Some(region) = scene.region {
            for b in region.balls() {
                out.push_str(&format!(
                    "<circle class=\"ball\" cx=\"{}\" cy=\"{}\" r=\"{}\" stroke=\"#22aa66\"/>\n",
                    dec(&b.center.x),
                    dec(&b.center.y),
                    dec_sqrt(b.r2.value())
                ));
            }
        }
        out.push_str("</g>\n");
    }

    // crossing events for each probe
    if !scene.probes.is_empty() {
        out.push_str("<g class=\"events\" stroke-width=\"0.015\">\n");
        for probe in &scene.probes {
            for e in classify_target(target, probe) {
                let (x, y, kind) = match (e.component, &e.pos) {
                    (ComponentRef::Point(i), _) => {
                        let p = &target.points()[i];
                        (p.x.clone(), p.y.clone(), e.kind)
                    }
                    (ComponentRef::Arc(i), Some(pos)) => {
                        let (x, y) = param_point(&target.arcs()[i], pos);
                        (x, y, e.kind)
                    }
                    _ => continue,
                };
                let (class, color) = match kind {
                    EventKind::Transversal => ("transversal", "#2a8f4a"),
                    EventKind::TangentInside => ("tangent-inside", "#cc3344"),
                    EventKind::TangentOutside => ("tangent-outside", "#dd8822"),
                    EventKind::EndpointTouch => ("endpoint-touch", "#3355bb"),
                    EventKind::Overlap => ("overlap", "#883399"),
                };
                out.push_str(&format!(
                    "<circle class=\"event {}\" cx=\"{}\" cy=\"{}\" r=\"0.07\" fill=\"{}\"/>\n",
                    class,
                    dec(&x),
                    dec(&y),
                    color
                ));
            }
        }
        out.push_str("</g>\n");
    }

    // bend sub-arcs highlighted
    if !scene.bends.is_empty() {
        out.push_str("<g class=\"bends\" stroke=\"#cc3344\" stroke-width=\"0.05\">\n");
        for bend in &scene.bends {
            let arc = &target.arcs()[bend.arc];
            let vs = arc.vertices();
            let mut d = String::new();
            let (sx, sy) = param_point(arc, &bend.start);
            d.push_str(&format!("M{} {} ", dec(&sx), dec(&sy)));
            for v in vs.iter().take(bend.end.seg + 1).skip(bend.start.seg + 1) {
                d.push_str(&format!("L{} {} ", dec(&v.x), dec(&v.y)));
            }
            let (ex, ey) = param_point(arc, &bend.end);
            d.push_str(&format!("L{} {}", dec(&ex), dec(&ey)));
            out.push_str(&format!("<path class=\"bend\" d=\"{}\"/>\n", d));
        }
        out.push_str("</g>\n");
    }

    // realization rectangles, one group per level
    if let Some(re) = scene.realization {
        out.push_str("<g class=\"realization\" stroke-width=\"0.02\">\n");
        let root = &re.root;
        out.push_str(&format!(
            "<rect class=\"root\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" stroke=\"#666666\"/>\n",
            dec(&root.min.x),
            dec(&root.min.y),
            dec(&root.width()),
            dec(&root.height())
        ));
        let palette = ["#4466cc", "#22aa66", "#dd8822", "#cc3344", "#883399"];
        for (k, level) in re.levels.iter().enumerate() {
            let color = palette[k % palette.len()];
            out.push_str(&format!("<g class=\"level-{}\" stroke=\"{}\">\n", k, color));
            for chain in level {
                for link in chain {
                    out.push_str(&rect_svg(link));
                }
            }
            out.push_str("</g>\n");
        }
        out.push_str("</g>\n");
    }

    out.push_str("</g>\n</svg>\n");
    out
}

fn rect_svg(r: &Rect) -> String {
    format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>\n",
        dec(&r.min.x),
        dec(&r.min.y),
        dec(&r.width()),
        dec(&r.height())
    )
}
