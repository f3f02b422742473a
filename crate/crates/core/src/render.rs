//! CSV tables and SVG heatmaps of sweep output.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Numeric CSV table; unparsable cells become NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers = reader.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            rows.push(record?.iter().map(|c| c.parse().unwrap_or(f64::NAN)).collect());
        }
        Ok(Table { headers, rows })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let k = self.headers.iter().position(|h| h == name).ok_or_else(|| Error::MissingColumn(name.to_string()))?;
        Ok(self.rows.iter().map(|r| r.get(k).copied().unwrap_or(f64::NAN)).collect())
    }
}

/// Cell to highlight on a heatmap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    None,
    Min,
    Max,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const TOP: f64 = 30.0;
const PLOT_W: f64 = 440.0;
const PLOT_H: f64 = 380.0;

// viridis samples
const STOPS: [(f64, f64, f64); 5] = [
    (68.0, 1.0, 84.0),
    (59.0, 82.0, 139.0),
    (33.0, 145.0, 140.0),
    (94.0, 201.0, 98.0),
    (253.0, 231.0, 37.0),
];

/// Linear color scale on `t` in [0, 1].
pub fn color(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let x = t * (STOPS.len() - 1) as f64;
    let k = (x.floor() as usize).min(STOPS.len() - 2);
    let f = x - k as f64;
    let (a, b) = (STOPS[k], STOPS[k + 1]);
    let mix = |p: f64, q: f64| (p + f * (q - p)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn axis_values(v: &[f64]) -> Vec<f64> {
    let mut u: Vec<f64> = v.iter().copied().filter(|x| x.is_finite()).collect();
    u.sort_by(f64::total_cmp);
    u.dedup();
    u
}

fn label(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.3e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders column `z` over the grid spanned by columns `x` and `y`.
pub fn heatmap_svg(table: &Table, x: &str, y: &str, z: &str, marker: Marker) -> Result<String> {
    let (xs, ys, zs) = (table.column(x)?, table.column(y)?, table.column(z)?);
    let (ux, uy) = (axis_values(&xs), axis_values(&ys));
    if ux.is_empty() || uy.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let finite: Vec<f64> = zs.iter().copied().filter(|v| v.is_finite()).collect();
    let zmin = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let zmax = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if zmax > zmin { zmax - zmin } else { 1.0 };
    let (cw, ch) = (PLOT_W / ux.len() as f64, PLOT_H / uy.len() as f64);
    let col = |v: f64| ux.iter().position(|&u| u == v);
    let row = |v: f64| uy.iter().position(|&u| u == v);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let mut best: Option<(usize, usize, f64)> = None;
    for ((&xv, &yv), &zv) in xs.iter().zip(&ys).zip(&zs) {
        let (Some(i), Some(j)) = (col(xv), row(yv)) else { continue };
        let fill = if zv.is_finite() { color((zv - zmin) / span) } else { "#bbbbbb".to_string() };
        let px = LEFT + i as f64 * cw;
        let py = TOP + PLOT_H - (j + 1) as f64 * ch;
        let _ = writeln!(
            s,
            r#"<rect class="cell" x="{px:.2}" y="{py:.2}" width="{:.2}" height="{:.2}" fill="{fill}"><title>{x}={} {y}={} {z}={}</title></rect>"#,
            cw + 0.3,
            ch + 0.3,
            label(xv),
            label(yv),
            label(zv)
        );
        if zv.is_finite() {
            let better = match (marker, best) {
                (_, None) => true,
                (Marker::Min, Some(b)) => zv < b.2,
                (Marker::Max, Some(b)) => zv > b.2,
                (Marker::None, _) => false,
            };
            if better {
                best = Some((i, j, zv));
            }
        }
    }
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{PLOT_W}" height="{PLOT_H}" fill="none" stroke="black"/>"#
    );
    let ticks = |n: usize| -> Vec<usize> {
        let k = n.min(5);
        if k <= 1 {
            return vec![0];
        }
        (0..k).map(|t| t * (n - 1) / (k - 1)).collect()
    };
    for i in ticks(ux.len()) {
        let px = LEFT + (i as f64 + 0.5) * cw;
        let py = TOP + PLOT_H;
        let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{py}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, py + 5.0);
        let _ = writeln!(
            s,
            r#"<text class="xtick" x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            py + 18.0,
            label(ux[i])
        );
    }
    for j in ticks(uy.len()) {
        let py = TOP + PLOT_H - (j as f64 + 0.5) * ch;
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/>"#, LEFT - 5.0);
        let _ = writeln!(
            s,
            r#"<text class="ytick" x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            py + 4.0,
            label(uy[j])
        );
    }
    let _ = writeln!(
        s,
        r#"<text class="xlabel" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + PLOT_W / 2.0,
        HEIGHT - 20.0,
        escape(x)
    );
    let _ = writeln!(
        s,
        r#"<text class="ylabel" transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
        TOP + PLOT_H / 2.0,
        escape(y)
    );
    // color bar
    let bx = LEFT + PLOT_W + 30.0;
    let steps = 32;
    for k in 0..steps {
        let t = k as f64 / (steps - 1) as f64;
        let by = TOP + PLOT_H * (1.0 - (k + 1) as f64 / steps as f64);
        let _ = writeln!(
            s,
            r#"<rect class="bar" x="{bx}" y="{by:.2}" width="18" height="{:.2}" fill="{}"/>"#,
            PLOT_H / steps as f64 + 0.3,
            color(t)
        );
    }
    if !finite.is_empty() {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, bx + 24.0, TOP + 10.0, label(zmax));
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, bx + 24.0, TOP + PLOT_H, label(zmin));
    }
    let _ = writeln!(
        s,
        r#"<text class="zlabel" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        bx + 9.0,
        TOP + PLOT_H + 30.0,
        escape(z)
    );
    if let Some((i, j, v)) = best {
        let px = LEFT + (i as f64 + 0.5) * cw;
        let py = TOP + PLOT_H - (j as f64 + 0.5) * ch;
        let _ = writeln!(
            s,
            r#"<circle class="marker" cx="{px:.2}" cy="{py:.2}" r="6" fill="none" stroke="red" stroke-width="2" data-x="{}" data-y="{}" data-z="{}"/>"#,
            ux[i], uy[j], v
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_BY_TWO: &str = "a,b,c\n0,0,1\n0,1,2\n1,0,3\n1,1,4\n";

    #[test]
    fn four_cells_and_marker() {
        let t = Table::parse(TWO_BY_TWO).unwrap();
        let svg = heatmap_svg(&t, "a", "b", "c", Marker::Max).unwrap();
        assert_eq!(svg.matches(r#"class="cell""#).count(), 4);
        assert!(svg.contains(r#"data-x="1" data-y="1" data-z="4""#));
        let svg = heatmap_svg(&t, "a", "b", "c", Marker::Min).unwrap();
        assert!(svg.contains(r#"data-z="1""#));
    }

    #[test]
    fn errors() {
        let t = Table::parse(TWO_BY_TWO).unwrap();
        assert!(matches!(heatmap_svg(&t, "a", "b", "zz", Marker::None), Err(Error::MissingColumn(c)) if c == "zz"));
        let empty = Table::parse("a,b,c\n").unwrap();
        assert!(matches!(heatmap_svg(&empty, "a", "b", "c", Marker::None), Err(Error::EmptyGrid)));
    }

    #[test]
    fn color_scale_ends() {
        assert_eq!(color(0.0), "#440154");
        assert_eq!(color(1.0), "#fde725");
        assert_eq!(color(f64::NAN), "#440154");
    }
}
