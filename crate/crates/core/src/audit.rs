//! JSON-lines audit logging, schema version 1.0.0.
//!
//! Each record is one JSON object per line. Keys appear in a fixed order:
//! `schema_version`, `timestamp_utc`, `logger`, `level`, `event`, `message`,
//! followed by whichever of the optional `task`, `context`, `exception` are set.
//!
//! An [`AuditSink`] writes every record at INFO or above to a per-run file named
//! `<task>_<YYYYMMDD_HHMMSS>.log`, and mirrors records at or above its console
//! level to stderr as `ts - task - LEVEL - message`.
//!
//! Library code does not take a sink argument. Instead a sink is *activated*
//! for the current thread ([`activate`]); fail-safe error paths then report
//! themselves through [`risk`] as ERROR records carrying an `exception` field.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::clock::Clock;
use crate::error::{Error, Result};
use crate::series::Timestamp;

pub const SCHEMA_VERSION: &str = "1.0.0";

const MANDATORY: [&str; 6] = [
    "schema_version",
    "timestamp_utc",
    "logger",
    "level",
    "event",
    "message",
];
const OPTIONAL: [&str; 3] = ["task", "context", "exception"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Level {
    Debug,
    Info,
    Warning,
    Error,
    Critical,
}

impl Level {
    pub fn as_str(&self) -> &'static str {
        match self {
            Level::Debug => "DEBUG",
            Level::Info => "INFO",
            Level::Warning => "WARNING",
            Level::Error => "ERROR",
            Level::Critical => "CRITICAL",
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        match s {
            "DEBUG" => Some(Level::Debug),
            "INFO" => Some(Level::Info),
            "WARNING" => Some(Level::Warning),
            "ERROR" => Some(Level::Error),
            "CRITICAL" => Some(Level::Critical),
            _ => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Scalar value in a record's flat `context` map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ContextValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<&str> for ContextValue {
    fn from(s: &str) -> Self {
        ContextValue::Text(s.to_string())
    }
}

impl From<String> for ContextValue {
    fn from(s: String) -> Self {
        ContextValue::Text(s)
    }
}

impl From<f64> for ContextValue {
    fn from(v: f64) -> Self {
        ContextValue::Float(v)
    }
}

impl From<usize> for ContextValue {
    fn from(v: usize) -> Self {
        ContextValue::Int(v as i64)
    }
}

impl From<i64> for ContextValue {
    fn from(v: i64) -> Self {
        ContextValue::Int(v)
    }
}

impl From<u64> for ContextValue {
    fn from(v: u64) -> Self {
        // seeds above i64::MAX stay exact as text
        i64::try_from(v).map_or_else(|_| ContextValue::Text(v.to_string()), ContextValue::Int)
    }
}

impl From<bool> for ContextValue {
    fn from(v: bool) -> Self {
        ContextValue::Bool(v)
    }
}

/// One audit event. Field order here is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRecord {
    schema_version: &'static str,
    pub timestamp_utc: Timestamp,
    pub logger: String,
    pub level: Level,
    pub event: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub task: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context: Option<BTreeMap<String, ContextValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exception: Option<String>,
}

impl AuditRecord {
    pub fn new(
        timestamp_utc: Timestamp,
        logger: impl Into<String>,
        level: Level,
        event: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        AuditRecord {
            schema_version: SCHEMA_VERSION,
            timestamp_utc,
            logger: logger.into(),
            level,
            event: event.into(),
            message: message.into(),
            task: None,
            context: None,
            exception: None,
        }
    }

    pub fn with_task(mut self, task: impl Into<String>) -> Self {
        self.task = Some(task.into());
        self
    }

    pub fn with_context(mut self, key: impl Into<String>, value: impl Into<ContextValue>) -> Self {
        self.context
            .get_or_insert_with(BTreeMap::new)
            .insert(key.into(), value.into());
        self
    }

    pub fn with_exception(mut self, exception: impl Into<String>) -> Self {
        self.exception = Some(exception.into());
        self
    }

    pub fn schema_version(&self) -> &str {
        self.schema_version
    }

    /// Single-line JSON rendering (no trailing newline).
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("audit records always serialize")
    }

    fn check(&self) -> Result<()> {
        for (name, value) in [
            ("logger", &self.logger),
            ("event", &self.event),
            ("message", &self.message),
        ] {
            if value.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "audit record field '{name}' must not be empty"
                )));
            }
        }
        Ok(())
    }
}

/// Per-run audit destination: a JSON-lines file plus a console mirror.
pub struct AuditSink {
    task: String,
    path: PathBuf,
    file: File,
    console_level: Level,
    clock: Arc<dyn Clock>,
}

impl fmt::Debug for AuditSink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AuditSink")
            .field("task", &self.task)
            .field("path", &self.path)
            .field("console_level", &self.console_level)
            .finish()
    }
}

impl AuditSink {
    /// The file threshold. Not configurable.
    pub const FILE_LEVEL: Level = Level::Info;

    /// Creates `log_dir` if needed and opens `<task>_<YYYYMMDD_HHMMSS>.log`
    /// for appending, stamped with the clock's current time.
    pub fn open(
        task: &str,
        log_dir: impl AsRef<Path>,
        console_level: Level,
        clock: Arc<dyn Clock>,
    ) -> Result<AuditSink> {
        if task.is_empty() {
            return Err(Error::InvalidArgument("task name must not be empty".into()));
        }
        let log_dir = log_dir.as_ref();
        std::fs::create_dir_all(log_dir).map_err(|e| Error::io(log_dir, e))?;
        let path = log_dir.join(log_file_name(task, clock.now()));
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        Ok(AuditSink {
            task: task.to_string(),
            path,
            file,
            console_level,
            clock,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn task(&self) -> &str {
        &self.task
    }

    pub fn now(&self) -> Timestamp {
        self.clock.now()
    }

    /// Record stamped with this sink's clock and task.
    pub fn record(&self, level: Level, logger: &str, event: &str, message: &str) -> AuditRecord {
        AuditRecord::new(self.clock.now(), logger, level, event, message).with_task(&self.task)
    }

    /// Writes one record; flushes the file before returning.
    pub fn emit(&mut self, record: &AuditRecord) -> Result<()> {
        record.check()?;
        if record.level >= self.console_level {
            eprintln!(
                "{} - {} - {} - {}",
                record
                    .timestamp_utc
                    .as_datetime()
                    .format("%Y-%m-%d %H:%M:%S,%3f"),
                record.task.as_deref().unwrap_or(&record.logger),
                record.level,
                record.message
            );
        }
        if record.level >= Self::FILE_LEVEL {
            let mut line = record.to_json_line();
            line.push('\n');
            self.file
                .write_all(line.as_bytes())
                .and_then(|_| self.file.flush())
                .map_err(|e| Error::io(&self.path, e))?;
        }
        Ok(())
    }

    pub fn log(&mut self, level: Level, logger: &str, event: &str, message: &str) -> Result<()> {
        let rec = self.record(level, logger, event, message);
        self.emit(&rec)
    }
}

/// `<task>_<YYYYMMDD_HHMMSS>.log`
pub fn log_file_name(task: &str, at: Timestamp) -> String {
    format!("{task}_{}.log", at.as_datetime().format("%Y%m%d_%H%M%S"))
}

thread_local! {
    static ACTIVE: RefCell<Option<AuditSink>> = const { RefCell::new(None) };
}

/// Keeps a sink active on the current thread until dropped or finished.
#[must_use = "the sink is deactivated when the guard drops"]
pub struct ActiveSink {
    previous: Option<AuditSink>,
    done: bool,
}

/// Makes `sink` the current thread's audit destination.
pub fn activate(sink: AuditSink) -> ActiveSink {
    let previous = ACTIVE.with(|a| a.borrow_mut().replace(sink));
    ActiveSink {
        previous,
        done: false,
    }
}

impl ActiveSink {
    /// Deactivates and hands the sink back.
    pub fn finish(mut self) -> Option<AuditSink> {
        self.done = true;
        let prev = self.previous.take();
        ACTIVE.with(|a| std::mem::replace(&mut *a.borrow_mut(), prev))
    }
}

impl Drop for ActiveSink {
    fn drop(&mut self) {
        if !self.done {
            let prev = self.previous.take();
            ACTIVE.with(|a| *a.borrow_mut() = prev);
        }
    }
}

/// Runs `f` against the active sink, if any.
pub fn with_active<R>(f: impl FnOnce(&mut AuditSink) -> R) -> Option<R> {
    ACTIVE.with(|a| a.borrow_mut().as_mut().map(f))
}

pub fn is_active() -> bool {
    ACTIVE.with(|a| a.borrow().is_some())
}

/// Emits through the active sink; a no-op when none is active.
pub fn log(level: Level, logger: &str, event: &str, message: &str) -> Result<()> {
    with_active(|s| s.log(level, logger, event, message)).unwrap_or(Ok(()))
}

/// Emits a pre-built record through the active sink, restamping its time
/// and task from the sink.
pub fn emit_active(record: AuditRecord) -> Result<()> {
    with_active(|s| {
        let mut rec = record;
        rec.timestamp_utc = s.now();
        rec.task = Some(s.task().to_string());
        s.emit(&rec)
    })
    .unwrap_or(Ok(()))
}

/// Reports a fail-safe error as an ERROR record and returns it unchanged.
pub fn risk(logger: &str, event: &str, err: Error) -> Error {
    with_active(|s| {
        let rec = s
            .record(Level::Error, logger, event, &err.to_string())
            .with_exception(format!("{}: {}", err.name(), err));
        if let Err(e) = s.emit(&rec) {
            eprintln!("audit log write failed: {e}");
        }
    });
    err
}

/// Reports a recoverable anomaly as a WARNING record.
pub(crate) fn warn(logger: &str, event: &str, message: &str) {
    if let Err(e) = log(Level::Warning, logger, event, message) {
        eprintln!("audit log write failed: {e}");
    }
}

/// One schema violation found by [`validate_log`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line:{} {}", self.line, self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LogReport {
    pub lines: usize,
    pub violations: Vec<Violation>,
}

impl LogReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn timestamp_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}\.\d{6}Z$").expect("valid regex")
    })
}

pub fn validate_log(path: impl AsRef<Path>) -> Result<LogReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(validate_log_text(&text))
}

/// Checks every line of a JSON-lines audit log against schema 1.0.0.
pub fn validate_log_text(text: &str) -> LogReport {
    let mut report = LogReport::default();
    let mut last: Option<Timestamp> = None;
    let mut push = |line: usize, reason: String| report.violations.push(Violation { line, reason });
    let mut count = 0;
    for (i, raw) in text.split_terminator('\n').enumerate() {
        let line = i + 1;
        count = line;
        let value: serde_json::Value = match serde_json::from_str(raw) {
            Ok(v) => v,
            Err(e) => {
                push(line, format!("invalid JSON: {e}"));
                continue;
            }
        };
        let Some(obj) = value.as_object() else {
            push(line, "record is not a JSON object".into());
            continue;
        };
        for key in MANDATORY {
            match obj.get(key) {
                None => push(line, format!("missing mandatory field '{key}'")),
                Some(serde_json::Value::String(s)) if s.is_empty() => {
                    push(line, format!("mandatory field '{key}' is empty"))
                }
                Some(serde_json::Value::String(_)) => {}
                Some(_) => push(line, format!("mandatory field '{key}' is not a string")),
            }
        }
        for key in obj.keys() {
            if !MANDATORY.contains(&key.as_str()) && !OPTIONAL.contains(&key.as_str()) {
                push(line, format!("unknown field '{key}'"));
            }
        }
        if let Some(v) = obj.get("schema_version").and_then(|v| v.as_str()) {
            if v != SCHEMA_VERSION {
                push(
                    line,
                    format!("schema_version '{v}' is not '{SCHEMA_VERSION}'"),
                );
            }
        }
        if let Some(v) = obj.get("level").and_then(|v| v.as_str()) {
            if Level::parse(v).is_none() {
                push(
                    line,
                    format!("level '{v}' is not one of DEBUG/INFO/WARNING/ERROR/CRITICAL"),
                );
            }
        }
        if let Some(ts) = obj.get("timestamp_utc").and_then(|v| v.as_str()) {
            if !timestamp_pattern().is_match(ts) {
                push(
                    line,
                    format!("timestamp_utc '{ts}' is not ISO 8601 UTC with microseconds and Z"),
                );
            } else {
                match Timestamp::parse(ts) {
                    Err(_) => push(line, format!("timestamp_utc '{ts}' is not a valid instant")),
                    Ok(t) => {
                        if last.is_some_and(|prev| t < prev) {
                            push(line, format!("timestamp_utc '{ts}' decreases"));
                        }
                        last = Some(t);
                    }
                }
            }
        }
        for key in ["task", "exception"] {
            if let Some(v) = obj.get(key) {
                if !v.is_string() {
                    push(line, format!("optional field '{key}' is not a string"));
                }
            }
        }
        if let Some(ctx) = obj.get("context") {
            match ctx.as_object() {
                None => push(line, "context is not an object".into()),
                Some(map) => {
                    if map.values().any(|v| v.is_object() || v.is_array()) {
                        push(line, "context is not flat".into());
                    }
                }
            }
        }
    }
    report.lines = count;
    report
}
