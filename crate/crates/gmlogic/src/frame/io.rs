//! Line-oriented text format for frames and pointed models.
//!
//! ```text
//! frame <name>
//! worlds <n>
//! up <i> <j>                          repeatable
//! closure [reflexive] [transitive]    optional
//! point <i>                           optional
//! val <letter> <i> <i> ...            repeatable
//! end
//! ```
//!
//! Sections appear in this order; `#` starts a comment.

use super::{make_frame, Closure, Frame, FrameError, PointedModel, WorldSet};
use crate::formula::is_letter;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// Contents of a frame file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedFile {
    pub name: String,
    pub frame: Frame,
    pub point: Option<usize>,
    pub valuation: BTreeMap<String, WorldSet>,
}

impl ParsedFile {
    /// The pointed model; files without a `point` line are pointed at world 0.
    pub fn model(&self) -> PointedModel {
        PointedModel::new(self.frame.clone(), self.valuation.clone(), self.point.unwrap_or(0))
            .expect("parsed files are validated")
    }
}

/// Renders a frame, optionally with a point and valuation, in the file format.
pub fn render(name: &str, frame: &Frame, point: Option<usize>, valuation: &BTreeMap<String, WorldSet>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "frame {name}");
    let _ = writeln!(out, "worlds {}", frame.n());
    for (i, j) in frame.edges() {
        let _ = writeln!(out, "up {i} {j}");
    }
    if let Some(p) = point {
        let _ = writeln!(out, "point {p}");
    }
    for (letter, set) in valuation {
        out.push_str("val ");
        out.push_str(letter);
        for w in set.iter() {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

/// Writes a pointed model to `path`.
pub fn save(path: &Path, name: &str, model: &PointedModel) -> Result<(), FrameError> {
    let text = render(name, model.frame(), Some(model.point()), model.valuation());
    std::fs::write(path, text).map_err(|source| FrameError::IoError {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a frame file from `path`.
pub fn load(path: &Path) -> Result<ParsedFile, FrameError> {
    let text = std::fs::read_to_string(path).map_err(|source| FrameError::IoError {
        path: path.to_path_buf(),
        source,
    })?;
    parse_text(&text).map_err(|e| match e {
        FrameError::ParseError { line, message, .. } => FrameError::ParseError {
            path: Some(path.to_path_buf()),
            line,
            message,
        },
        other => other,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Stage {
    Start,
    Name,
    Worlds,
    Up,
    Closure,
    Point,
    Val,
    End,
}

/// Parses the file format from a string.
pub fn parse_text(text: &str) -> Result<ParsedFile, FrameError> {
    let mut stage = Stage::Start;
    let mut name = String::new();
    let mut n = 0usize;
    let mut edges = Vec::new();
    let mut close = Closure::NONE;
    let mut point = None;
    let mut valuation = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| FrameError::ParseError {
            path: None,
            line,
            message,
        };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let keyword = words.next().unwrap_or("");
        let args: Vec<&str> = words.collect();
        let next = match keyword {
            "frame" => Stage::Name,
            "worlds" => Stage::Worlds,
            "up" => Stage::Up,
            "closure" => Stage::Closure,
            "point" => Stage::Point,
            "val" => Stage::Val,
            "end" => Stage::End,
            other => return Err(err(format!("unknown directive {other:?}"))),
        };
        let repeatable = matches!(next, Stage::Up | Stage::Val);
        if stage == Stage::End {
            return Err(err("content after `end`".into()));
        }
        if next < stage || (next == stage && !repeatable) {
            return Err(err(format!("`{keyword}` out of order")));
        }
        if stage == Stage::Start && next != Stage::Name {
            return Err(err("file must start with `frame <name>`".into()));
        }
        if stage == Stage::Name && next != Stage::Worlds {
            return Err(err("`worlds <n>` must follow `frame`".into()));
        }
        let index = |s: &str| -> Result<usize, FrameError> {
            let i: usize = s.parse().map_err(|_| err(format!("expected a world index, found {s:?}")))?;
            if i >= n {
                return Err(err(format!("world {i} out of range for {n} worlds")));
            }
            Ok(i)
        };
        match next {
            Stage::Name => {
                if args.len() != 1 {
                    return Err(err("expected `frame <name>`".into()));
                }
                name = args[0].to_string();
            }
            Stage::Worlds => {
                if args.len() != 1 {
                    return Err(err("expected `worlds <n>`".into()));
                }
                n = args[0]
                    .parse()
                    .ok()
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| err(format!("bad world count {:?}", args[0])))?;
            }
            Stage::Up => {
                if args.len() != 2 {
                    return Err(err("expected `up <i> <j>`".into()));
                }
                edges.push((index(args[0])?, index(args[1])?));
            }
            Stage::Closure => {
                for a in &args {
                    match *a {
                        "reflexive" => close.reflexive = true,
                        "transitive" => close.transitive = true,
                        other => return Err(err(format!("unknown closure {other:?}"))),
                    }
                }
            }
            Stage::Point => {
                if args.len() != 1 {
                    return Err(err("expected `point <i>`".into()));
                }
                point = Some(index(args[0])?);
            }
            Stage::Val => {
                let Some((letter, worlds)) = args.split_first() else {
                    return Err(err("expected `val <letter> <i>...`".into()));
                };
                if !is_letter(letter) {
                    return Err(err(format!("invalid letter {letter:?}")));
                }
                if valuation.contains_key(*letter) {
                    return Err(err(format!("letter {letter:?} given twice")));
                }
                let mut set = WorldSet::empty(n);
                for w in worlds {
                    set.insert(index(w)?);
                }
                valuation.insert(letter.to_string(), set);
            }
            Stage::End => {
                if !args.is_empty() {
                    return Err(err("`end` takes no arguments".into()));
                }
            }
            Stage::Start => unreachable!(),
        }
        stage = next;
    }
    if stage != Stage::End {
        return Err(FrameError::ParseError {
            path: None,
            line: text.lines().count(),
            message: "missing `end`".into(),
        });
    }
    let frame = make_frame(n, &edges, close)?;
    Ok(ParsedFile {
        name,
        frame,
        point,
        valuation,
    })
}
