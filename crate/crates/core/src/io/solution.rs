//! Solution files.
//!
//! ```text
//! paritysol 3;
//! 0 1;
//! 1 0 2;
//! 2 1;
//! ```
//!
//! One record per node: its id, its winner and, for nodes where the winner
//! moves, the chosen successor. Ids refer to the external ids of the game.

use std::fmt::Write;

use thiserror::Error;

use crate::game::{NodeId, ParityGame, Player, Solution, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: node {id} is not in the game")]
    UnknownNode { line: usize, id: u64 },
    #[error("line {line}: node {id} appears twice")]
    DuplicateNode { line: usize, id: u64 },
    #[error("no winner given for node {0}")]
    MissingNode(u64),
    #[error("header announces {announced} records, file has {found}")]
    CountMismatch { announced: usize, found: usize },
}

/// Parses a solution of `game` from `text`.
pub fn parse_solution(text: &str, game: &ParityGame) -> Result<Solution, SolutionParseError> {
    let n = game.node_count();
    let mut winner: Vec<Option<Player>> = vec![None; n];
    let mut strategies = [Strategy::empty(n), Strategy::empty(n)];
    let mut announced = None;
    let mut found = 0;

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let syntax = |message: &str| SolutionParseError::Syntax {
            line,
            message: message.to_owned(),
        };
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        let body = content
            .strip_suffix(';')
            .ok_or_else(|| syntax("missing `;` at the end of the line"))?;
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.first() == Some(&"paritysol") {
            if announced.is_some() || found > 0 {
                return Err(syntax("the header must come first"));
            }
            let count = match fields.as_slice() {
                [_, count] => count
                    .parse::<usize>()
                    .map_err(|_| syntax("invalid record count"))?,
                _ => return Err(syntax("expected `paritysol <count>;`")),
            };
            announced = Some(count);
            continue;
        }
        let number = |s: &str, what: &str| {
            s.parse::<u64>()
                .map_err(|_| syntax(&format!("invalid {what} `{s}`")))
        };
        let (id, player, choice) = match fields.as_slice() {
            [id, w] => (number(id, "node id")?, number(w, "winner")?, None),
            [id, w, s] => (
                number(id, "node id")?,
                number(w, "winner")?,
                Some(number(s, "successor")?),
            ),
            _ => return Err(syntax("expected `<id> <winner> [<successor>];`")),
        };
        let player = Player::from_index(player as usize)
            .filter(|_| player <= 1)
            .ok_or_else(|| syntax("winner must be 0 or 1"))?;
        let v = game
            .node_by_external_id(id)
            .ok_or(SolutionParseError::UnknownNode { line, id })?;
        if winner[v.index()].is_some() {
            return Err(SolutionParseError::DuplicateNode { line, id });
        }
        winner[v.index()] = Some(player);
        if let Some(s) = choice {
            let w = game
                .node_by_external_id(s)
                .ok_or(SolutionParseError::UnknownNode { line, id: s })?;
            strategies[player.index()].set(v, Some(w));
        }
        found += 1;
    }

    if let Some(announced) = announced {
        if announced != found {
            return Err(SolutionParseError::CountMismatch { announced, found });
        }
    }
    let winner = winner
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or(SolutionParseError::MissingNode(game.external_id(NodeId(i)))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Solution { winner, strategies })
}

/// Writes `solution` using the external ids of `game`.
pub fn emit_solution(game: &ParityGame, solution: &Solution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "paritysol {};", game.node_count());
    for v in game.nodes() {
        let _ = write!(out, "{} {}", game.external_id(v), solution.winner(v));
        if let Some(w) = solution.choice(v) {
            let _ = write!(out, " {}", game.external_id(w));
        }
        out.push_str(";\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_game;

    fn game() -> ParityGame {
        parse_game("parity 7;\n3 1 1 5;\n5 2 0 3,7;\n7 0 0 7;").unwrap()
    }

    #[test]
    fn round_trip() {
        let g = game();
        let text = "paritysol 3;\n3 0;\n5 0 7;\n7 0 7;\n";
        let s = parse_solution(text, &g).unwrap();
        assert_eq!(s.choice(NodeId(1)), Some(NodeId(2)));
        assert_eq!(emit_solution(&g, &s), text);
    }

    #[test]
    fn rejects_bad_files() {
        let g = game();
        assert_eq!(
            parse_solution("3 0;\n5 0;", &g),
            Err(SolutionParseError::MissingNode(7))
        );
        assert_eq!(
            parse_solution("3 0;\n3 1;", &g),
            Err(SolutionParseError::DuplicateNode { line: 2, id: 3 })
        );
        assert_eq!(
            parse_solution("4 0;", &g),
            Err(SolutionParseError::UnknownNode { line: 1, id: 4 })
        );
        assert_eq!(
            parse_solution("paritysol 2;\n3 0;\n5 0;\n7 0;", &g),
            Err(SolutionParseError::CountMismatch {
                announced: 2,
                found: 3
            })
        );
        assert!(matches!(
            parse_solution("3 2;", &g),
            Err(SolutionParseError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_solution("3 0", &g),
            Err(SolutionParseError::Syntax { line: 1, .. })
        ));
    }
}
