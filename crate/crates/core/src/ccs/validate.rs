use std::fmt;

use serde::{Deserialize, Serialize};

use super::command::{CadSequence, Command};

/// Structural and geometric problems found by [`validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IssueCode {
    /// The sequence does not open with `<SOL>`.
    MissingSol,
    /// No `<EOS>` terminates the sequence.
    MissingEos,
    /// `<EOS>` appears somewhere other than the last position.
    EosNotLast,
    /// A `<SOL>` with no curve before the next `<SOL>`, `<Extrude>` or `<EOS>`.
    EmptyLoop,
    /// A circle shares its loop with other curves.
    CircleNotAlone,
    /// A curve appears outside any loop (e.g. right after an extrude).
    CurveOutsideLoop,
    /// An extrude with no sketch before it.
    ExtrudeWithoutSketch,
    /// A sketch group that is never extruded.
    MissingExtrude,
    /// An arc with zero sweep, or whose chord has zero length.
    DegenerateArc,
    /// A line whose endpoint equals its start point.
    DegenerateSegment,
    /// A circle with radius 0.
    ZeroRadius,
    /// An extrude with scale 0.
    ZeroScale,
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub position: usize,
    pub code: IssueCode,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationResult {
    pub ok: bool,
    pub issues: Vec<Issue>,
}

impl ValidationResult {
    pub fn has(&self, code: IssueCode) -> bool {
        self.issues.iter().any(|i| i.code == code)
    }
}

/// Checks every structural invariant of a command sequence plus the
/// degeneracies that would stop geometric evaluation.
///
/// A Line/Arc loop starts at the stored endpoint of its last curve, so the
/// endpoint chain is cyclic and closed by construction; what can still go
/// wrong is a zero-length step or a zero-sweep arc.
pub fn validate(seq: &CadSequence) -> ValidationResult {
    let mut issues = Vec::new();
    let mut push = |position: usize, code: IssueCode, message: String| issues.push(Issue { position, code, message });
    let commands = seq.commands();

    if commands.first() != Some(&Command::Sol) {
        push(0, IssueCode::MissingSol, "sequence must begin with <SOL>".into());
    }

    // index of the <SOL> opening the current loop, and the loop's curves
    let mut open_loop: Option<(usize, Vec<usize>)> = None;
    // first position of a sketch group not yet followed by an extrude
    let mut pending_group: Option<usize> = None;
    let mut any_sketch = false;
    let mut seen_eos = false;

    let close_loop = |open_loop: &mut Option<(usize, Vec<usize>)>, push: &mut dyn FnMut(usize, IssueCode, String)| {
        if let Some((sol, curves)) = open_loop.take() {
            if curves.is_empty() {
                push(sol, IssueCode::EmptyLoop, "loop has no curves".into());
            } else {
                check_loop(commands, &curves, push);
            }
        }
    };

    for (i, command) in commands.iter().enumerate() {
        if seen_eos {
            push(i, IssueCode::EosNotLast, "command after <EOS>".into());
            break;
        }
        match command {
            Command::Sol => {
                close_loop(&mut open_loop, &mut push);
                open_loop = Some((i, Vec::new()));
                pending_group.get_or_insert(i);
                any_sketch = true;
            }
            Command::Line { .. } | Command::Arc { .. } | Command::Circle { .. } => match &mut open_loop {
                Some((_, curves)) => curves.push(i),
                None => push(i, IssueCode::CurveOutsideLoop, "curve is not preceded by <SOL>".into()),
            },
            Command::Extrude(e) => {
                close_loop(&mut open_loop, &mut push);
                if !any_sketch {
                    push(i, IssueCode::ExtrudeWithoutSketch, "extrude has no sketch to sweep".into());
                }
                pending_group = None;
                if e.s == 0 {
                    push(i, IssueCode::ZeroScale, "extrude scale s=0".into());
                }
            }
            Command::Eos => {
                close_loop(&mut open_loop, &mut push);
                seen_eos = true;
            }
        }
    }
    if let Some(group) = pending_group {
        push(group, IssueCode::MissingExtrude, "sketch group is never extruded".into());
    }
    if !seen_eos {
        push(commands.len(), IssueCode::MissingEos, "sequence must end with <EOS>".into());
    }

    issues.sort_by_key(|i| i.position);
    ValidationResult { ok: issues.is_empty(), issues }
}

fn check_loop(commands: &[Command], curves: &[usize], push: &mut dyn FnMut(usize, IssueCode, String)) {
    if let Some(&circle) = curves.iter().find(|&&i| matches!(commands[i], Command::Circle { .. })) {
        if curves.len() > 1 {
            let offender = if circle == curves[0] { curves[1] } else { circle };
            push(offender, IssueCode::CircleNotAlone, "a circle must be the only curve of its loop".into());
            return;
        }
        if let Command::Circle { r: 0, .. } = commands[circle] {
            push(circle, IssueCode::ZeroRadius, "circle radius r=0".into());
        }
        return;
    }
    let last = *curves.last().expect("loop is non-empty");
    let mut previous = commands[last].point().expect("curve has a point");
    for &i in curves {
        let point = commands[i].point().expect("curve has a point");
        match commands[i] {
            Command::Line { .. } if point == previous => {
                push(i, IssueCode::DegenerateSegment, "line has zero length".into())
            }
            Command::Arc { alpha: 0, .. } => push(i, IssueCode::DegenerateArc, "arc sweep α=0".into()),
            Command::Arc { .. } if point == previous => {
                push(i, IssueCode::DegenerateArc, "arc start and end coincide".into())
            }
            _ => {}
        }
        previous = point;
    }
}
