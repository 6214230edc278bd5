//! C ABI for `banded-darboux`.
//!
//! Configurations and reports are opaque handles; each constructor has a
//! matching `*_free`. Status codes 0 to 4 coincide with the CLI exit codes.
//! The message of the last failure on the calling thread is available from
//! [`bd_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use banded_darboux::harness::{run_command, Command, InstanceConfig, Overrides, RunOutcome};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BdStatus {
    Ok = 0,
    Config = 1,
    Hypothesis = 2,
    SingularMinor = 3,
    Internal = 4,
    /// Null pointer, invalid UTF-8 or unknown command.
    InvalidArgument = 5,
    /// A panic was caught at the boundary.
    Panic = 6,
}

impl BdStatus {
    fn from_exit_code(code: i32) -> Self {
        match code {
            0 => BdStatus::Ok,
            1 => BdStatus::Config,
            2 => BdStatus::Hypothesis,
            3 => BdStatus::SingularMinor,
            _ => BdStatus::Internal,
        }
    }
}

pub const BD_COMMAND_GEN: u32 = 0;
pub const BD_COMMAND_FACTORIZE: u32 = 1;
pub const BD_COMMAND_TRANSFORM: u32 = 2;
pub const BD_COMMAND_POLYS: u32 = 3;
pub const BD_COMMAND_VERIFY: u32 = 4;

/// Parsed instance configuration.
pub struct BdConfig {
    inner: InstanceConfig,
}

/// Result of one command run.
pub struct BdReport {
    exit_code: i32,
    json: CString,
    table: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> BdStatus) -> BdStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("panic inside banded-darboux");
            BdStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, BdStatus> {
    if s.is_null() {
        set_error(format!("{what} is null"));
        return Err(BdStatus::InvalidArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        BdStatus::InvalidArgument
    })
}

fn command_of(code: u32) -> Option<Command> {
    Some(match code {
        BD_COMMAND_GEN => Command::Gen,
        BD_COMMAND_FACTORIZE => Command::Factorize,
        BD_COMMAND_TRANSFORM => Command::Transform,
        BD_COMMAND_POLYS => Command::Polys,
        BD_COMMAND_VERIFY => Command::Verify,
        _ => return None,
    })
}

fn to_cstring(s: String) -> CString {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed")
}

fn report_of(outcome: RunOutcome) -> BdReport {
    if let Some(err) = &outcome.report.error {
        set_error(err.message.clone());
    }
    BdReport {
        exit_code: outcome.exit_code,
        json: to_cstring(outcome.report.to_json()),
        table: to_cstring(outcome.table),
    }
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn bd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn bd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parse a JSON configuration into `*out`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_config_from_json(json: *const c_char, out: *mut *mut BdConfig) -> BdStatus {
    guard(|| {
        if out.is_null() {
            set_error("out is null");
            return BdStatus::InvalidArgument;
        }
        *out = ptr::null_mut();
        let text = match read_str(json, "json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match InstanceConfig::from_json(text).and_then(|c| c.validate().map(|_| c)) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(BdConfig { inner }));
                BdStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                BdStatus::Config
            }
        }
    })
}

/// Override the seed.
///
/// # Safety
/// `config` must come from [`bd_config_from_json`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn bd_config_set_seed(config: *mut BdConfig, seed: u64) -> BdStatus {
    guard(|| match config.as_mut() {
        Some(c) => {
            c.inner.apply(&Overrides {
                seed: Some(seed),
                ..Overrides::default()
            });
            BdStatus::Ok
        }
        None => {
            set_error("config is null");
            BdStatus::InvalidArgument
        }
    })
}

/// Override the shift `C`, given as `"num/den"`.
///
/// # Safety
/// `config` must come from [`bd_config_from_json`]; `shift` must be a valid
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn bd_config_set_shift(config: *mut BdConfig, shift: *const c_char) -> BdStatus {
    guard(|| {
        let Some(c) = config.as_mut() else {
            set_error("config is null");
            return BdStatus::InvalidArgument;
        };
        let text = match read_str(shift, "shift") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let mut next = c.inner.clone();
        next.apply(&Overrides {
            shift: Some(text.to_string()),
            ..Overrides::default()
        });
        match next.validate() {
            Ok(()) => {
                c.inner = next;
                BdStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                BdStatus::Config
            }
        }
    })
}

/// # Safety
/// `config` must come from [`bd_config_from_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn bd_config_free(config: *mut BdConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Run `command` (one of the `BD_COMMAND_*` values). `j < 0` selects all
/// stages for transform and polys. On statuses 0 to 4 a report is stored in
/// `*out` and must be released with [`bd_report_free`].
///
/// # Safety
/// `config` must come from [`bd_config_from_json`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bd_run(config: *const BdConfig, command: u32, j: i64, out: *mut *mut BdReport) -> BdStatus {
    guard(|| {
        if out.is_null() {
            set_error("out is null");
            return BdStatus::InvalidArgument;
        }
        *out = ptr::null_mut();
        let Some(c) = config.as_ref() else {
            set_error("config is null");
            return BdStatus::InvalidArgument;
        };
        let Some(cmd) = command_of(command) else {
            set_error(format!("unknown command {command}"));
            return BdStatus::InvalidArgument;
        };
        let stage = usize::try_from(j).ok();
        let report = report_of(run_command(cmd, &c.inner, stage));
        let status = BdStatus::from_exit_code(report.exit_code);
        *out = Box::into_raw(Box::new(report));
        status
    })
}

/// Exit code of the run, as the CLI would return it.
///
/// # Safety
/// `report` must come from [`bd_run`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn bd_report_exit_code(report: *const BdReport) -> i32 {
    report.as_ref().map_or(-1, |r| r.exit_code)
}

/// JSON report, borrowed from `report`.
///
/// # Safety
/// `report` must come from [`bd_run`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn bd_report_json(report: *const BdReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// Human-readable table, borrowed from `report`.
///
/// # Safety
/// `report` must come from [`bd_run`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn bd_report_table(report: *const BdReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.table.as_ptr())
}

/// # Safety
/// `report` must come from [`bd_run`] or be null.
#[no_mangle]
pub unsafe extern "C" fn bd_report_free(report: *mut BdReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// One-shot `verify`: parse `config_json`, run, and store an owned copy of
/// the JSON report in `*report_json` (release with [`bd_string_free`]).
///
/// # Safety
/// `config_json` must be a valid NUL-terminated string and `report_json` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_verify_json(config_json: *const c_char, report_json: *mut *mut c_char) -> BdStatus {
    guard(|| {
        if report_json.is_null() {
            set_error("report_json is null");
            return BdStatus::InvalidArgument;
        }
        *report_json = ptr::null_mut();
        let text = match read_str(config_json, "config_json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let config = match InstanceConfig::from_json(text) {
            Ok(c) => c,
            Err(e) => {
                set_error(e.to_string());
                return BdStatus::Config;
            }
        };
        let report = report_of(run_command(Command::Verify, &config, None));
        *report_json = report.json.into_raw();
        BdStatus::from_exit_code(report.exit_code)
    })
}

/// # Safety
/// `s` must come from [`bd_verify_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn bd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
