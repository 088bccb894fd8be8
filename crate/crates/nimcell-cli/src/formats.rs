//! On-disk formats: game and rule files (JSON), bracket expressions
//! (nested-list JSON), and grid artifacts (PBM or CSV).

use std::fmt;

use serde::{Deserialize, Serialize};

use nimcell::cellular::{CARows, CARule};
use nimcell::circuits::BracketExpr;
use nimcell::games::{Game, InvariantGame, ModularGame, MoveVector, PGrid};
use nimcell::reductions::GadgetSpec;

/// Errors carrying the process exit code: 1 for bad input, 2 for shape
/// mismatches.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Shape(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Shape(_) => 2,
        }
    }

    pub fn input(msg: impl fmt::Display) -> Self {
        CliError::Input(msg.to_string())
    }

    pub fn shape(msg: impl fmt::Display) -> Self {
        CliError::Shape(msg.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Shape(m) => write!(f, "{m}"),
        }
    }
}

impl From<nimcell::games::GameError> for CliError {
    fn from(e: nimcell::games::GameError) -> Self {
        use nimcell::games::GameError::*;
        match e {
            BoxDimension { .. } | BoxMismatch | PositionDimension { .. } => CliError::shape(e),
            _ => CliError::input(e),
        }
    }
}

impl From<nimcell::verify::VerifyError> for CliError {
    fn from(e: nimcell::verify::VerifyError) -> Self {
        use nimcell::verify::VerifyError::*;
        match e {
            ShapeMismatch | BoxTooSmall { .. } => CliError::shape(e),
            Game(g) => g.into(),
            Circuit(c) => CliError::input(c),
        }
    }
}

/// Game file schema. Move lists are written sorted lexicographically, so
/// saving a loaded file reproduces it byte for byte.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GameFile {
    Invariant { d: usize, moves: Vec<Vec<i64>> },
    Modular { k: usize, move_sets: Vec<Vec<(i64, i64)>> },
}

impl GameFile {
    pub fn from_game(game: &Game) -> GameFile {
        match game {
            Game::Invariant(g) => GameFile::Invariant {
                d: g.heap_count(),
                moves: g.moves().iter().map(|m| m.components().to_vec()).collect(),
            },
            Game::Modular(g) => GameFile::Modular {
                k: g.modulus(),
                move_sets: g.move_sets().to_vec(),
            },
        }
    }

    pub fn into_game(self) -> Result<Game, CliError> {
        match self {
            GameFile::Invariant { d, moves } => {
                let moves = moves.into_iter().map(MoveVector::new).collect();
                Ok(Game::Invariant(
                    InvariantGame::new(d, moves).map_err(CliError::input)?,
                ))
            }
            GameFile::Modular { k, move_sets } => Ok(Game::Modular(
                ModularGame::new(k, move_sets).map_err(CliError::input)?,
            )),
        }
    }
}

/// Rule file schema: arity plus the truth table as 0/1 entries, most
/// significant bit = leftmost neighbor.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    pub n: usize,
    pub table: Vec<u8>,
}

impl RuleFile {
    pub fn into_rule(self) -> Result<CARule, CliError> {
        if let Some(bad) = self.table.iter().find(|&&b| b > 1) {
            return Err(CliError::input(format!("table entry {bad} is not a bit")));
        }
        CARule::from_bits(self.n, &self.table).map_err(CliError::input)
    }
}

/// Sidecar describing the gadget of a compiled invariant game.
#[derive(Serialize, Deserialize)]
pub struct GadgetFile {
    pub k: usize,
    pub l: usize,
    #[serde(rename = "N")]
    pub trash_bound: i64,
    pub d: usize,
}

impl GadgetFile {
    pub fn from_spec(spec: &GadgetSpec) -> GadgetFile {
        GadgetFile {
            k: spec.k,
            l: spec.l,
            trash_bound: spec.trash_bound,
            d: spec.heap_count(),
        }
    }
}

/// What a JSON input file turned out to contain.
pub enum InputFile {
    Game(Game),
    Rule(CARule),
    Expr(BracketExpr),
}

/// Reads a JSON file that may hold a game, a rule, or a bracket expression
/// (a nested list whose leaves are nonnegative cell shifts).
pub fn load_input(path: &std::path::Path) -> Result<InputFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    match &value {
        serde_json::Value::Array(_) => Ok(InputFile::Expr(expr_from_value(&value)?)),
        serde_json::Value::Object(map) if map.contains_key("kind") => {
            let file: GameFile = serde_json::from_value(value)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            Ok(InputFile::Game(file.into_game()?))
        }
        serde_json::Value::Object(map) if map.contains_key("n") => {
            let file: RuleFile = serde_json::from_value(value)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            Ok(InputFile::Rule(file.into_rule()?))
        }
        _ => Err(CliError::input(format!(
            "{}: expected a game, rule, or expression file",
            path.display()
        ))),
    }
}

pub fn load_game(path: &std::path::Path) -> Result<Game, CliError> {
    match load_input(path)? {
        InputFile::Game(g) => Ok(g),
        _ => Err(CliError::input(format!(
            "{}: expected a game file",
            path.display()
        ))),
    }
}

pub fn load_rule(path: &std::path::Path) -> Result<CARule, CliError> {
    match load_input(path)? {
        InputFile::Rule(r) => Ok(r),
        _ => Err(CliError::input(format!(
            "{}: expected a rule file",
            path.display()
        ))),
    }
}

fn expr_from_value(value: &serde_json::Value) -> Result<BracketExpr, CliError> {
    match value {
        serde_json::Value::Number(n) => {
            let shift = n
                .as_u64()
                .ok_or_else(|| CliError::input(format!("shift {n} must be a nonnegative integer")))?;
            Ok(BracketExpr::Var(shift as usize))
        }
        serde_json::Value::Array(items) => {
            let children = items
                .iter()
                .map(expr_from_value)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(BracketExpr::Bracket(children))
        }
        other => Err(CliError::input(format!(
            "expression nodes are numbers or lists, found {other}"
        ))),
    }
}

/// Serializes a JSON document the way every writer here does: compact, with
/// a trailing newline, identical bytes on every run.
pub fn to_json_line<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec(value).expect("serialization cannot fail");
    bytes.push(b'\n');
    bytes
}

/// Pretty JSON for reports.
pub fn to_json_pretty<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serialization cannot fail");
    bytes.push(b'\n');
    bytes
}

/// Renders a two-dimensional grid as a plain PBM (type P1): width is the
/// first bound, height the second, and the row with the highest second
/// coordinate comes first, so time runs upward when the file is viewed as an
/// image. Bit 1 marks a P-position. Fixed header, no comments,
/// newline-terminated.
pub fn write_pbm_grid(grid: &PGrid) -> Result<Vec<u8>, CliError> {
    let dims = grid.bounds().dims();
    if dims.len() != 2 {
        return Err(CliError::input(format!(
            "PBM output needs a two-dimensional grid, found {} dimensions",
            dims.len()
        )));
    }
    let (width, height) = (dims[0], dims[1]);
    let mut out = format!("P1\n{width} {height}\n").into_bytes();
    for row in (0..height).rev() {
        for col in 0..width {
            let p = grid.get(&nimcell::games::Position::new(vec![col, row]));
            out.push(if p { b'1' } else { b'0' });
        }
        out.push(b'\n');
    }
    Ok(out)
}

/// Renders automaton rows as a PBM with the same orientation: row 0 of the
/// automaton is the bottom image row.
pub fn write_pbm_rows(rows: &CARows) -> Vec<u8> {
    let (width, height) = (rows.width(), rows.row_count());
    let mut out = format!("P1\n{width} {height}\n").into_bytes();
    for t in (0..height).rev() {
        for i in 0..width {
            out.push(if rows.get(t, i) { b'1' } else { b'0' });
        }
        out.push(b'\n');
    }
    out
}

/// Lists P-positions one per line, coordinates comma-separated, sorted
/// lexicographically; the format for grids of more than two dimensions.
pub fn write_csv_grid(grid: &PGrid) -> Vec<u8> {
    let mut out = Vec::new();
    for pos in grid.p_positions() {
        let line: Vec<String> = pos.coords().iter().map(|c| c.to_string()).collect();
        out.extend_from_slice(line.join(",").as_bytes());
        out.push(b'\n');
    }
    out
}

/// Parses `"25,25"`-style box bounds.
pub fn parse_box(spec: &str) -> Result<Vec<u64>, CliError> {
    spec.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| CliError::input(format!("bad box bound {part:?} in {spec:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nimcell::circuits::{gates_from_expr, xor_expr};
    use nimcell::reductions::{invariant_from_modular, modular_from_gates};

    fn reload(game: &Game) -> (Vec<u8>, Game) {
        let bytes = to_json_line(&GameFile::from_game(game));
        let file: GameFile = serde_json::from_slice(&bytes).unwrap();
        (bytes, file.into_game().unwrap())
    }

    #[test]
    fn save_load_save_is_byte_identical() {
        let modular = modular_from_gates(&gates_from_expr(&xor_expr()).unwrap());
        let (invariant, _) = invariant_from_modular(&modular);
        for game in [Game::Modular(modular), Game::Invariant(invariant)] {
            let (bytes, reloaded) = reload(&game);
            assert_eq!(reloaded, game);
            let (bytes_again, _) = reload(&reloaded);
            assert_eq!(bytes, bytes_again);
        }
    }

    #[test]
    fn saved_moves_are_sorted() {
        let game = Game::Invariant(
            InvariantGame::new(
                2,
                vec![MoveVector::new(vec![-1, -3]), MoveVector::new(vec![-2, 1])],
            )
            .unwrap(),
        );
        let bytes = to_json_line(&GameFile::from_game(&game));
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            "{\"kind\":\"invariant\",\"d\":2,\"moves\":[[-2,1],[-1,-3]]}\n"
        );
    }

    #[test]
    fn expression_files_parse_to_trees() {
        let value: serde_json::Value = serde_json::from_str("[[1,0],[[1],[0]]]").unwrap();
        assert_eq!(expr_from_value(&value).unwrap(), xor_expr());
        let bad: serde_json::Value = serde_json::from_str("[true]").unwrap();
        assert!(expr_from_value(&bad).is_err());
        let negative: serde_json::Value = serde_json::from_str("[-1]").unwrap();
        assert!(expr_from_value(&negative).is_err());
    }
}
