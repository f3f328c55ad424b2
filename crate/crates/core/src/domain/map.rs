use std::fmt;
use std::path::Path;

use thiserror::Error;

/// Row-major occupancy bitmap; `true` is blocked. Row 0 is the first body
/// line of a map file.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupancyGrid {
    width: usize,
    height: usize,
    cells: Vec<bool>,
}

#[derive(Debug, Error)]
pub enum MapError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot read map: {0}")]
    Io(#[from] std::io::Error),
}

impl OccupancyGrid {
    pub fn new(width: usize, height: usize) -> Self {
        OccupancyGrid {
            width,
            height,
            cells: vec![false; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn in_bounds(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    /// Out-of-bounds cells read as blocked.
    pub fn is_blocked(&self, x: i64, y: i64) -> bool {
        !self.in_bounds(x, y) || self.cells[y as usize * self.width + x as usize]
    }

    pub fn set_blocked(&mut self, x: usize, y: usize, blocked: bool) {
        self.cells[y * self.width + x] = blocked;
    }

    pub fn blocked_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn free_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.height)
            .flat_map(move |y| (0..self.width).map(move |x| (x, y)))
            .filter(move |&(x, y)| !self.cells[y * self.width + x])
    }
}

impl fmt::Display for OccupancyGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "type octile")?;
        writeln!(f, "height {}", self.height)?;
        writeln!(f, "width {}", self.width)?;
        writeln!(f, "map")?;
        for row in self.cells.chunks(self.width.max(1)) {
            let line: String = row.iter().map(|&b| if b { '@' } else { '.' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn header_value(line: Option<(usize, &str)>, key: &str, at: usize) -> Result<usize, MapError> {
    let (n, text) = line.ok_or_else(|| MapError::Parse {
        line: at,
        message: format!("missing `{key}` line"),
    })?;
    let mut parts = text.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => v.parse().map_err(|_| MapError::Parse {
            line: n,
            message: format!("bad {key} value `{v}`"),
        }),
        _ => Err(MapError::Parse {
            line: n,
            message: format!("expected `{key} <n>`, found `{text}`"),
        }),
    }
}

/// Parses the octile grid-map text format: a four-line header
/// (`type`, `height H`, `width W`, `map`) followed by `H` rows of `W`
/// characters. `.` is free, `@` and `T` are blocked.
pub fn parse_map(text: &str) -> Result<OccupancyGrid, MapError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    match lines.next() {
        Some((_, l)) if l.split_whitespace().next() == Some("type") => {}
        Some((n, l)) => {
            return Err(MapError::Parse {
                line: n,
                message: format!("expected `type ...`, found `{l}`"),
            })
        }
        None => {
            return Err(MapError::Parse {
                line: 1,
                message: "empty file".into(),
            })
        }
    }
    let height = header_value(lines.next(), "height", 2)?;
    let width = header_value(lines.next(), "width", 3)?;
    match lines.next() {
        Some((_, l)) if l.trim() == "map" => {}
        Some((n, l)) => {
            return Err(MapError::Parse {
                line: n,
                message: format!("expected `map`, found `{l}`"),
            })
        }
        None => {
            return Err(MapError::Parse {
                line: 4,
                message: "missing `map` line".into(),
            })
        }
    }
    let mut grid = OccupancyGrid::new(width, height);
    for y in 0..height {
        let (n, row) = lines.next().ok_or_else(|| MapError::Parse {
            line: 5 + y,
            message: format!("expected {height} rows, found {y}"),
        })?;
        let chars: Vec<char> = row.chars().collect();
        if chars.len() != width {
            return Err(MapError::Parse {
                line: n,
                message: format!("row has {} cells, expected {width}", chars.len()),
            });
        }
        for (x, c) in chars.into_iter().enumerate() {
            match c {
                '.' => {}
                '@' | 'T' => grid.set_blocked(x, y, true),
                other => {
                    return Err(MapError::Parse {
                        line: n,
                        message: format!("unknown cell character `{other}`"),
                    })
                }
            }
        }
    }
    if let Some((n, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(MapError::Parse {
            line: n,
            message: format!("unexpected content after {height} rows: `{extra}`"),
        });
    }
    Ok(grid)
}

pub fn load_map(path: impl AsRef<Path>) -> Result<OccupancyGrid, MapError> {
    parse_map(&std::fs::read_to_string(path)?)
}
