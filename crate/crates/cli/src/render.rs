//! SVG and text renderings of a tiling.

use std::fmt::Write;

use polylock::verify::adjacent_tile_pairs;
use polylock::{Result, Tiling};

pub const CELL_PX: usize = 20;

const PALETTE: [&str; 12] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd",
    "#ccebc5", "#ffed6f",
];

/// Greedy coloring of tiles in label order; adjacent tiles get different
/// colors. Returns one color index per tile label.
pub fn greedy_colors(tiling: &Tiling) -> Result<Vec<usize>> {
    let n = tiling.num_tiles();
    let mut adj = vec![Vec::new(); n];
    for (a, b) in adjacent_tile_pairs(tiling)? {
        adj[a as usize].push(b as usize);
        adj[b as usize].push(a as usize);
    }
    let mut colors = vec![usize::MAX; n];
    for tile in 0..n {
        let mut used: Vec<usize> = adj[tile].iter().map(|&o| colors[o]).filter(|&c| c != usize::MAX).collect();
        used.sort_unstable();
        used.dedup();
        colors[tile] = (0..).find(|c| used.binary_search(c).is_err()).expect("unbounded range");
    }
    Ok(colors)
}

/// One filled `<path>` per tile plus a single stroked path for the borders
/// between distinct tiles and around the board.
pub fn svg(tiling: &Tiling) -> Result<String> {
    let topo = tiling.topology();
    let colors = greedy_colors(tiling)?;
    let (w, h) = (topo.width * CELL_PX, topo.height * CELL_PX);
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    for (label, cells) in tiling.tiles().iter().enumerate() {
        let mut d = String::new();
        for &cell in cells {
            let (x, y) = topo.coords(cell);
            write!(d, "M{} {}h{CELL_PX}v{CELL_PX}h-{CELL_PX}z", x * CELL_PX, y * CELL_PX).unwrap();
        }
        let fill = PALETTE[colors[label] % PALETTE.len()];
        writeln!(out, r#"<path class="tile" fill="{fill}" d="{d}"/>"#).unwrap();
    }
    let mut d = format!("M0 0H{w}V{h}H0z");
    for cell in 0..topo.area() {
        let (x, y) = topo.coords(cell);
        if x + 1 < topo.width && !tiling.same_tile(cell, cell + 1) {
            write!(d, "M{} {}v{CELL_PX}", (x + 1) * CELL_PX, y * CELL_PX).unwrap();
        }
        if y + 1 < topo.height && !tiling.same_tile(cell, cell + topo.width) {
            write!(d, "M{} {}h{CELL_PX}", x * CELL_PX, (y + 1) * CELL_PX).unwrap();
        }
    }
    writeln!(out, r##"<path class="borders" fill="none" stroke="#000" stroke-width="2" d="{d}"/>"##).unwrap();
    out.push_str("</svg>\n");
    Ok(out)
}

/// One letter per cell naming its tile's color; within a row, `-` joins
/// cells of the same tile and a space separates distinct tiles.
pub fn ascii(tiling: &Tiling) -> Result<String> {
    let topo = tiling.topology();
    let colors = greedy_colors(tiling)?;
    let mut out = String::new();
    for y in 0..topo.height {
        for x in 0..topo.width {
            let cell = topo.index(x, y);
            if x > 0 {
                out.push(if tiling.same_tile(cell - 1, cell) { '-' } else { ' ' });
            }
            out.push((b'A' + (colors[tiling.label(cell) as usize] % 26) as u8) as char);
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use polylock::Topology;

    #[test]
    fn vertical_dominoes() {
        let tiling = Tiling::from_labels(Topology::grid(2, 2), 2, vec![0, 1, 0, 1]);
        assert_eq!(ascii(&tiling).unwrap(), "A B\nA B\n");
    }

    #[test]
    fn horizontal_dominoes() {
        let tiling = Tiling::from_labels(Topology::grid(2, 2), 2, vec![0, 0, 1, 1]);
        assert_eq!(ascii(&tiling).unwrap(), "A-A\nB-B\n");
    }

    #[test]
    fn one_path_per_tile() {
        let tiling = Tiling::from_labels(Topology::grid(4, 2), 2, vec![0, 0, 1, 2, 3, 3, 1, 2]);
        let svg = svg(&tiling).unwrap();
        assert_eq!(svg.matches(r#"<path class="tile""#).count(), 4);
        assert_eq!(svg, super::svg(&tiling).unwrap());
    }

    #[test]
    fn neighbors_differ() {
        let tiling = Tiling::from_labels(Topology::grid(4, 2), 2, vec![0, 0, 1, 2, 3, 3, 1, 2]);
        let colors = greedy_colors(&tiling).unwrap();
        for (a, b) in adjacent_tile_pairs(&tiling).unwrap() {
            assert_ne!(colors[a as usize], colors[b as usize]);
        }
    }
}
