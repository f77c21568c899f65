use std::fmt;

use thiserror::Error;

/// Grid coordinates; `y = 0` is the top row, north decreases `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub x: u16,
    pub y: u16,
}

impl Cell {
    pub const fn new(x: u16, y: u16) -> Self {
        Cell { x, y }
    }

    pub fn manhattan(self, other: Cell) -> u32 {
        (self.x.abs_diff(other.x) + self.y.abs_diff(other.y)) as u32
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GhostColor {
    Blue,
    Orange,
}

impl GhostColor {
    pub const ALL: [GhostColor; 2] = [GhostColor::Blue, GhostColor::Orange];

    /// Token used in the fact vocabulary, e.g. `blueGhost`.
    pub fn ghost_name(self) -> &'static str {
        match self {
            GhostColor::Blue => "blueGhost",
            GhostColor::Orange => "orangeGhost",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GhostColor::Blue => "blue",
            GhostColor::Orange => "orange",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("line {line}, column {column}: unknown glyph `{glyph}`")]
    UnknownGlyph {
        line: usize,
        column: usize,
        glyph: char,
    },
    #[error("layout has no Pac-Man start `P`")]
    MissingPacman,
    #[error("layout has more than one Pac-Man start")]
    MultiplePacman,
    #[error("layout is empty")]
    Empty,
    #[error("layout is too large")]
    TooLarge,
}

/// A static maze. Food and capsule cells are listed in row-major order;
/// their positions in these lists index the state bitsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub width: u16,
    pub height: u16,
    walls: Vec<bool>,
    pub pacman_start: Cell,
    pub ghosts: Vec<(GhostColor, Cell)>,
    pub food: Vec<Cell>,
    pub capsules: Vec<Cell>,
}

/// Food pellets on the 5×3 mini layout.
pub const MINI_FOOD: usize = 11;

impl Layout {
    /// Parses an ASCII grid: `%` wall, `P` Pac-Man, `B` blue ghost, `O`
    /// orange ghost, `.` food, `o` capsule, space empty. Short lines are
    /// padded with empty cells; cells outside the grid count as walls.
    pub fn parse(text: &str) -> Result<Self, LayoutError> {
        let lines: Vec<&str> = text
            .lines()
            .map(|l| l.trim_end_matches('\r'))
            .collect();
        let lines: Vec<&str> = {
            let end = lines
                .iter()
                .rposition(|l| !l.trim().is_empty())
                .ok_or(LayoutError::Empty)?;
            lines[..=end].to_vec()
        };
        let width = lines.iter().map(|l| l.chars().count()).max().unwrap_or(0);
        if width > u16::MAX as usize || lines.len() > u16::MAX as usize {
            return Err(LayoutError::TooLarge);
        }
        let (width, height) = (width as u16, lines.len() as u16);
        let mut walls = vec![false; width as usize * height as usize];
        let mut pacman = None;
        let mut ghosts = Vec::new();
        let mut food = Vec::new();
        let mut capsules = Vec::new();
        for (y, line) in lines.iter().enumerate() {
            for (x, glyph) in line.chars().enumerate() {
                let cell = Cell::new(x as u16, y as u16);
                match glyph {
                    '%' => walls[y * width as usize + x] = true,
                    ' ' => {}
                    '.' => food.push(cell),
                    'o' => capsules.push(cell),
                    'B' => ghosts.push((GhostColor::Blue, cell)),
                    'O' => ghosts.push((GhostColor::Orange, cell)),
                    'P' => {
                        if pacman.replace(cell).is_some() {
                            return Err(LayoutError::MultiplePacman);
                        }
                    }
                    glyph => {
                        return Err(LayoutError::UnknownGlyph {
                            line: y + 1,
                            column: x + 1,
                            glyph,
                        })
                    }
                }
            }
        }
        Ok(Layout {
            width,
            height,
            walls,
            pacman_start: pacman.ok_or(LayoutError::MissingPacman)?,
            ghosts,
            food,
            capsules,
        })
    }

    pub fn is_wall(&self, x: i32, y: i32) -> bool {
        if x < 0 || y < 0 || x >= self.width as i32 || y >= self.height as i32 {
            return true;
        }
        self.walls[y as usize * self.width as usize + x as usize]
    }

    pub fn open_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.height).flat_map(move |y| {
            (0..self.width)
                .map(move |x| Cell::new(x, y))
                .filter(move |c| !self.is_wall(c.x as i32, c.y as i32))
        })
    }

    pub fn food_index(&self, cell: Cell) -> Option<usize> {
        self.food.iter().position(|&c| c == cell)
    }

    pub fn capsule_index(&self, cell: Cell) -> Option<usize> {
        self.capsules.iter().position(|&c| c == cell)
    }

    /// Problems with a layout meant to be the 5×3 mini game.
    pub fn mini_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if (self.width, self.height) != (5, 3) {
            out.push(format!("expected a 5x3 grid, found {}x{}", self.width, self.height));
        }
        if self.food.len() != MINI_FOOD {
            out.push(format!(
                "expected {MINI_FOOD} food pellets, found {}",
                self.food.len()
            ));
        }
        out
    }
}

pub const MINI_LAYOUT: &str = include_str!("../layouts/mini.lay");
pub const CLASSIC2G_LAYOUT: &str = include_str!("../layouts/classic2g.lay");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mini_layout() {
        let l = Layout::parse(MINI_LAYOUT).unwrap();
        assert_eq!((l.width, l.height), (5, 3));
        assert_eq!(l.ghosts, vec![(GhostColor::Blue, Cell::new(4, 0))]);
        assert_eq!(l.capsules, vec![Cell::new(0, 2)]);
        assert_eq!(l.food.len(), 11);
        assert_eq!(l.pacman_start, Cell::new(2, 1));
        assert!(l.mini_warnings().is_empty());
        assert_eq!(l.open_cells().count(), 15);
    }

    #[test]
    fn classic_layout_has_two_colored_ghosts() {
        let l = Layout::parse(CLASSIC2G_LAYOUT).unwrap();
        let colors: Vec<_> = l.ghosts.iter().map(|g| g.0).collect();
        assert_eq!(colors, vec![GhostColor::Blue, GhostColor::Orange]);
        assert_eq!(l.capsules.len(), 2);
        assert!(!l.mini_warnings().is_empty());
    }

    #[test]
    fn walls_only_is_an_error() {
        assert_eq!(
            Layout::parse("%%%\n% %\n%%%\n"),
            Err(LayoutError::MissingPacman)
        );
        assert_eq!(Layout::parse("\n\n"), Err(LayoutError::Empty));
    }

    #[test]
    fn unknown_glyph_is_located() {
        assert_eq!(
            Layout::parse("P.\n.x"),
            Err(LayoutError::UnknownGlyph {
                line: 2,
                column: 2,
                glyph: 'x'
            })
        );
    }

    #[test]
    fn outside_is_wall() {
        let l = Layout::parse("P.").unwrap();
        assert!(l.is_wall(-1, 0));
        assert!(l.is_wall(2, 0));
        assert!(!l.is_wall(1, 0));
    }
}
