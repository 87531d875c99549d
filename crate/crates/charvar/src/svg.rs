//! SVG rendering of pillowcase pictures: boundary images of strata and
//! their overlays, drawn from the exact data. Floats enter only at
//! render time.

use crate::arcs::KnotSide;
use crate::pillowcase::{Angle, PillowPoint, PillowSegment};
use crate::presentation::GluingMatrix;
use crate::Result;
use num_rational::Rational64;
use std::fmt::Write as _;

/// Axis-aligned window in lift coordinates.
#[derive(Debug, Clone)]
pub struct Window {
    pub x_lo: Angle,
    pub x_hi: Angle,
    pub y_lo: Angle,
    pub y_hi: Angle,
}

impl Window {
    /// The neighborhood of the origin used by the default figures.
    pub fn near_origin() -> Window {
        Window {
            x_lo: Angle::zero(),
            x_hi: Angle::of(1, 4),
            y_lo: Angle::of(-1, 4),
            y_hi: Angle::of(1, 4),
        }
    }
}

/// One styled set of segments.
#[derive(Debug, Clone)]
pub struct Layer {
    pub class: &'static str,
    pub segments: Vec<PillowSegment>,
}

/// A figure: window, styled layers, and marked points.
#[derive(Debug, Clone)]
pub struct FigureSpec {
    pub window: Window,
    pub layers: Vec<Layer>,
    pub annotations: Vec<PillowPoint>,
    pub title: String,
}

/// Exact visible pieces of a segment inside the window: every deck image
/// of the segment clipped to the rectangle.
pub fn clip_to_window(seg: &PillowSegment, w: &Window) -> Vec<((Angle, Angle), (Angle, Angle))> {
    let two = Rational64::from_integer(2);
    let mut out = Vec::new();
    let (t_lo, t_hi, _, _) = seg.param_range();
    for sign in [1i64, -1] {
        let sgn = Rational64::from_integer(sign);
        // Lift endpoints of the flipped copy.
        let a = seg.lift_at(t_lo);
        let b = seg.lift_at(t_hi);
        let (ax, ay) = (a.0.scale(sgn), a.1.scale(sgn));
        let (bx, by) = (b.0.scale(sgn), b.1.scale(sgn));
        let (x_min, x_max) = if ax <= bx { (ax, bx) } else { (bx, ax) };
        let (y_min, y_max) = if ay <= by { (ay, by) } else { (by, ay) };
        let k1_lo = ((w.x_lo - x_max).ratio() / two).ceil().to_integer();
        let k1_hi = ((w.x_hi - x_min).ratio() / two).floor().to_integer();
        let k2_lo = ((w.y_lo - y_max).ratio() / two).ceil().to_integer();
        let k2_hi = ((w.y_hi - y_min).ratio() / two).floor().to_integer();
        for k1 in k1_lo..=k1_hi {
            for k2 in k2_lo..=k2_hi {
                let dx = Angle::of(2 * k1, 1);
                let dy = Angle::of(2 * k2, 1);
                let p0 = (ax + dx, ay + dy);
                let p1 = (bx + dx, by + dy);
                if let Some(piece) = clip_line_piece(p0, p1, w) {
                    out.push(piece);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Clips the straight segment p0→p1 to the window, exactly.
fn clip_line_piece(
    p0: (Angle, Angle),
    p1: (Angle, Angle),
    w: &Window,
) -> Option<((Angle, Angle), (Angle, Angle))> {
    let dx = p1.0 - p0.0;
    let dy = p1.1 - p0.1;
    // Parametrize by t ∈ [0, 1]; intersect the four half-plane bounds.
    let mut t0 = Rational64::from_integer(0);
    let mut t1 = Rational64::from_integer(1);
    let mut bound = |delta: Angle, lo: Angle, val: Angle, upper: bool| -> bool {
        // Constraint: lo ≤ val + t·delta (lower) or val + t·delta ≤ lo (upper).
        let d = delta.ratio();
        let gap = (lo - val).ratio();
        if d == Rational64::from_integer(0) {
            return if upper { gap >= Rational64::from_integer(0) } else { gap <= Rational64::from_integer(0) };
        }
        let t_star = gap / d;
        match (upper, d > Rational64::from_integer(0)) {
            (false, true) | (true, false) => t0 = t0.max(t_star),
            _ => t1 = t1.min(t_star),
        }
        true
    };
    if !bound(dx, w.x_lo, p0.0, false)
        || !bound(dx, w.x_hi, p0.0, true)
        || !bound(dy, w.y_lo, p0.1, false)
        || !bound(dy, w.y_hi, p0.1, true)
    {
        return None;
    }
    if t0 > t1 {
        return None;
    }
    let at = |t: Rational64| (p0.0 + Angle::from_ratio(dx.ratio() * t), p0.1 + Angle::from_ratio(dy.ratio() * t));
    Some((at(t0), at(t1)))
}

/// Deck images of a point inside the window.
fn point_images(p: &PillowPoint, w: &Window) -> Vec<(Angle, Angle)> {
    let two = Rational64::from_integer(2);
    let mut out = Vec::new();
    for sign in [1i64, -1] {
        let sgn = Rational64::from_integer(sign);
        let (x, y) = (p.x().scale(sgn), p.y().scale(sgn));
        let k1_lo = ((w.x_lo - x).ratio() / two).ceil().to_integer();
        let k1_hi = ((w.x_hi - x).ratio() / two).floor().to_integer();
        let k2_lo = ((w.y_lo - y).ratio() / two).ceil().to_integer();
        let k2_hi = ((w.y_hi - y).ratio() / two).floor().to_integer();
        for k1 in k1_lo..=k1_hi {
            for k2 in k2_lo..=k2_hi {
                out.push((x + Angle::of(2 * k1, 1), y + Angle::of(2 * k2, 1)));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Renders a figure to an SVG document.
pub fn render(fig: &FigureSpec) -> String {
    let w = &fig.window;
    let width = 520.0;
    let span_x = (w.x_hi - w.x_lo).to_f64();
    let span_y = (w.y_hi - w.y_lo).to_f64();
    let height = (width * span_y / span_x).max(120.0);
    let sx = |a: Angle| (a - w.x_lo).to_f64() / span_x * width;
    let sy = |a: Angle| height - (a - w.y_lo).to_f64() / span_y * height;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        s,
        "<style>\n\
         .abelian {{ stroke: #777; stroke-width: 2.5; }}\n\
         .irreducible {{ stroke: #c0392b; stroke-width: 1.8; }}\n\
         .image {{ stroke: #2265c0; stroke-width: 1.8; stroke-dasharray: 6 3; }}\n\
         .mark {{ fill: #111; }}\n\
         .caption {{ font: 13px sans-serif; fill: #333; }}\n\
         </style>"
    );
    let _ = writeln!(s, "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>");
    let _ = writeln!(s, "<text x=\"8\" y=\"16\" class=\"caption\">{}</text>", fig.title);
    for layer in &fig.layers {
        for seg in &layer.segments {
            for (p0, p1) in clip_to_window(seg, w) {
                let _ = writeln!(
                    s,
                    "<line class=\"{}\" x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\"/>",
                    layer.class,
                    sx(p0.0),
                    sy(p0.1),
                    sx(p1.0),
                    sy(p1.1)
                );
            }
        }
    }
    for p in &fig.annotations {
        for (x, y) in point_images(p, w) {
            let _ = writeln!(
                s,
                "<circle class=\"mark\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"3.5\"/>",
                sx(x),
                sy(y)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn layers_of_side(side: &KnotSide, glued: Option<&GluingMatrix>) -> Vec<Layer> {
    let mut abelian = Vec::new();
    let mut irreducible = Vec::new();
    for st in &side.strata {
        let seg = match glued {
            Some(h) => crate::pillowcase::apply_gluing_segment(h, &st.boundary_image),
            None => st.boundary_image.clone(),
        };
        if st.is_abelian() {
            abelian.push(seg);
        } else {
            irreducible.push(seg);
        }
    }
    let class_main = if glued.is_some() { "image" } else { "irreducible" };
    vec![
        Layer { class: if glued.is_some() { "image" } else { "abelian" }, segments: abelian },
        Layer { class: class_main, segments: irreducible },
    ]
}

/// The five standard pictures: the boundary images of the two knot
/// exteriors and the composite exterior near the origin, and the two
/// overlays with the gluing applied to the right-hand side.
pub fn standard_figures() -> Result<Vec<(String, String)>> {
    let h = GluingMatrix::standard();
    let x = KnotSide::knot(3, 5)?;
    let y = KnotSide::knot(2, 7)?;
    let z = KnotSide::new(&[(-2, 7), (-2, 7)])?;
    let window = Window::near_origin();
    let special = crate::pillowcase::canonicalize(Angle::of(1, 14), Angle::of(-1, 14));
    let figs = vec![
        (
            "fig1.svg".to_string(),
            render(&FigureSpec {
                window: window.clone(),
                layers: layers_of_side(&x, None),
                annotations: vec![],
                title: "boundary image of the (3,5) exterior near the origin".into(),
            }),
        ),
        (
            "fig2.svg".to_string(),
            render(&FigureSpec {
                window: window.clone(),
                layers: layers_of_side(&y, None),
                annotations: vec![],
                title: "boundary image of the (2,7) exterior near the origin".into(),
            }),
        ),
        (
            "fig3.svg".to_string(),
            render(&FigureSpec {
                window: window.clone(),
                layers: [layers_of_side(&x, None), layers_of_side(&y, Some(&h))].concat(),
                annotations: vec![special],
                title: "overlay: (3,5) image and glued (2,7) image".into(),
            }),
        ),
        (
            "fig4.svg".to_string(),
            render(&FigureSpec {
                window: window.clone(),
                layers: layers_of_side(&z, None),
                annotations: vec![],
                title: "boundary image of the (-2,7)#(-2,7) exterior".into(),
            }),
        ),
        (
            "fig5.svg".to_string(),
            render(&FigureSpec {
                window,
                layers: [layers_of_side(&x, None), layers_of_side(&z, Some(&h))].concat(),
                annotations: vec![special],
                title: "overlay: (3,5) image and glued (-2,7)#(-2,7) image".into(),
            }),
        ),
    ];
    Ok(figs)
}
