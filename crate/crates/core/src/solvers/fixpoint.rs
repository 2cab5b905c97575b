//! Nested fixpoint iteration: always justify a node of the lowest
//! unjustified priority.

use crate::justify::find_justifiable;

use super::{Driver, SolveError};

pub(crate) fn run(driver: &mut Driver<'_>) -> Result<(), SolveError> {
    while let Some((v, dj)) = find_justifiable(&driver.j) {
        if driver.audit {
            let game = driver.game();
            let lowest = driver.j.unjustified().map(|u| game.priority(u)).min();
            driver.check(lowest == Some(game.priority(v)), || {
                format!("node {v} does not have the lowest unjustified priority")
            })?;
        }
        driver.step(v, dj)?;
    }
    Ok(())
}
