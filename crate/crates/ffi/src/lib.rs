//! C ABI for the `cohom` library.
//!
//! Objects cross the boundary as opaque handles created by `*_new` functions
//! and released by the matching `*_free`. Every fallible call returns a
//! [`CohomStatus`]; on failure `cohom_last_error` describes the problem.
//! Strings returned to the caller are freed with `cohom_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cohom::algebra::AlgebraTag;
use cohom::angles::{kahler_constancy, qk_constancy, ComplexStructure, QuaternionicStructure};
use cohom::classify::{classify_subspace, ClassificationRecord, Verdict};
use cohom::error::Error;
use cohom::families::{construct, FamilyLabel, FamilySpec};
use cohom::io::SubspaceFile;
use cohom::model::SolvableModel;
use cohom::numerics::Tolerance;
use cohom::stabilizers::cayley_modulus;
use cohom::subspace::Subspace;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CohomStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    DimensionMismatch = 3,
    Inadmissible = 4,
    Unsupported = 5,
    Panic = 6,
}

/// Verdict class of a classification record.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CohomVerdict {
    Transitive = 0,
    FoliationHorosphere = 1,
    FoliationSolvable = 2,
    TotallyGeodesic = 3,
    NonTotallyGeodesic = 4,
    NotCohomogeneityOne = 5,
    UnknownConstantAngle = 6,
}

/// A space `𝔽Hⁿ` given by its solvable model.
pub struct CohomModel {
    inner: SolvableModel,
}

/// A subspace `W` of `𝔳`, read as the normal space `𝔳₀^⊥` when classifying.
pub struct CohomSubspace {
    model: SolvableModel,
    w: Subspace,
}

/// Classification record of the action induced by a subspace.
pub struct CohomRecord {
    inner: ClassificationRecord,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: CohomStatus, msg: impl Into<String>) -> CohomStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> CohomStatus {
    let status = match e {
        Error::DimensionMismatch { .. } => CohomStatus::DimensionMismatch,
        Error::Inadmissible(_) => CohomStatus::Inadmissible,
        _ => CohomStatus::InvalidInput,
    };
    fail(status, e.to_string())
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), CohomStatus>) -> CohomStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CohomStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(CohomStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: cohom::error::Result<T>) -> Result<T, CohomStatus> {
    r.map_err(from_error)
}

fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, CohomStatus> {
    // SAFETY: the caller promises `p` is null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| fail(CohomStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, CohomStatus> {
    // SAFETY: the caller promises `p` is null or valid for writes.
    unsafe { p.as_mut() }.ok_or_else(|| fail(CohomStatus::NullPointer, format!("{what} is null")))
}

fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, CohomStatus> {
    if p.is_null() {
        return Err(fail(CohomStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: non-null and, by contract, NUL-terminated.
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| fail(CohomStatus::InvalidInput, format!("{what} is not UTF-8")))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn cohom_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cohom_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a space such as `"H:3"`.
///
/// # Safety
/// `space` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cohom_model_new(space: *const c_char, out: *mut *mut CohomModel) -> CohomStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let inner = lift(SolvableModel::parse(c_str(space, "space")?))?;
        *out = boxed(CohomModel { inner });
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from `cohom_model_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cohom_model_free(model: *mut CohomModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Real dimension of `𝔳`, the length of a basis row; 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cohom_model_dim_v(model: *const CohomModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.dim_v())
}

/// Subspace spanned by `count` rows of length `row_len`, stored row-major.
/// Rows that are not orthonormal are orthonormalized.
///
/// # Safety
/// `rows` must point to `count * row_len` doubles (or be null when `count`
/// is 0); `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cohom_subspace_new(
    model: *const CohomModel,
    rows: *const f64,
    count: usize,
    row_len: usize,
    out: *mut *mut CohomSubspace,
) -> CohomStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let m = non_null(model, "model")?.inner;
        if row_len != m.dim_v() {
            return Err(from_error(Error::DimensionMismatch { expected: m.dim_v(), got: row_len }));
        }
        let data: &[f64] = if count == 0 {
            &[]
        } else if rows.is_null() {
            return Err(fail(CohomStatus::NullPointer, "rows is null"));
        } else {
            std::slice::from_raw_parts(rows, count * row_len)
        };
        let file = SubspaceFile {
            algebra: m.tag(),
            n: m.n(),
            basis: data.chunks(row_len.max(1)).map(<[f64]>::to_vec).collect(),
        };
        let loaded = lift(file.validate())?;
        *out = boxed(CohomSubspace { model: loaded.model, w: loaded.w });
        Ok(())
    })
}

/// Subspace of a named family (`"complex"`, `"real"`, `"kangle"`, `"a"` to
/// `"f"`). Pass NaN as `phi` for families without an angle.
///
/// # Safety
/// `model` must be a live handle, `label` NUL-terminated, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cohom_subspace_from_family(
    model: *const CohomModel,
    label: *const c_char,
    k: usize,
    phi: f64,
    out: *mut *mut CohomSubspace,
) -> CohomStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let m = non_null(model, "model")?.inner;
        let label = lift(FamilyLabel::parse(c_str(label, "label")?))?;
        let phi = if phi.is_nan() { None } else { Some(phi) };
        let spec = lift(FamilySpec::new(label, m, k, phi))?;
        let w = lift(construct(&spec))?;
        *out = boxed(CohomSubspace { model: m, w });
        Ok(())
    })
}

/// # Safety
/// `sub` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cohom_subspace_free(sub: *mut CohomSubspace) {
    if !sub.is_null() {
        drop(Box::from_raw(sub));
    }
}

/// Dimension of the subspace; 0 for a null handle.
///
/// # Safety
/// `sub` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cohom_subspace_dim(sub: *const CohomSubspace) -> usize {
    sub.as_ref().map_or(0, |s| s.w.dim())
}

/// Copies the orthonormal basis, row-major, into `rows` (room for
/// `dim * dim_v` doubles).
///
/// # Safety
/// `sub` must be a live handle and `rows` valid for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn cohom_subspace_basis(
    sub: *const CohomSubspace,
    rows: *mut f64,
    capacity: usize,
) -> CohomStatus {
    guard(|| {
        let s = non_null(sub, "subspace")?;
        let (k, d) = (s.w.dim(), s.w.ambient_dim());
        if capacity < k * d {
            return Err(fail(CohomStatus::InvalidInput, format!("capacity {capacity} < {}", k * d)));
        }
        if k == 0 {
            return Ok(());
        }
        let dst = std::slice::from_raw_parts_mut(out_ptr(rows, "rows")?, k * d);
        for i in 0..k {
            for j in 0..d {
                dst[i * d + j] = s.w.basis()[(j, i)];
            }
        }
        Ok(())
    })
}

/// Kahler angle of a subspace of a complex model.
///
/// # Safety
/// `sub` must be a live handle; the out pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cohom_kahler_angle(
    sub: *const CohomSubspace,
    tol: f64,
    phi: *mut f64,
    constant: *mut bool,
    defect: *mut f64,
) -> CohomStatus {
    guard(|| {
        let s = non_null(sub, "subspace")?;
        let (phi, constant, defect) =
            (out_ptr(phi, "phi")?, out_ptr(constant, "constant")?, out_ptr(defect, "defect")?);
        if s.model.tag() != AlgebraTag::C {
            return Err(fail(CohomStatus::Unsupported, format!("Kahler angle needs a complex model, got {}", s.model)));
        }
        let j = lift(s.model.complex_structure().and_then(ComplexStructure::new))?;
        let tol = lift(Tolerance::default().with_defect(tol))?;
        let r = lift(kahler_constancy(&s.w, &j, &tol))?;
        (*phi, *constant, *defect) = (r.phi, r.constant, r.defect);
        Ok(())
    })
}

/// Quaternionic Kahler angle triple of a subspace of a quaternionic model,
/// with the sampled constancy defect.
///
/// # Safety
/// `sub` must be a live handle; `phi` valid for three doubles.
#[no_mangle]
pub unsafe extern "C" fn cohom_qk_angle(
    sub: *const CohomSubspace,
    samples: usize,
    seed: u64,
    phi: *mut f64,
    defect: *mut f64,
) -> CohomStatus {
    guard(|| {
        let s = non_null(sub, "subspace")?;
        let defect = out_ptr(defect, "defect")?;
        let phi = std::slice::from_raw_parts_mut(out_ptr(phi, "phi")?, 3);
        if s.model.tag() != AlgebraTag::H {
            return Err(fail(
                CohomStatus::Unsupported,
                format!("quaternionic Kahler angle needs a quaternionic model, got {}", s.model),
            ));
        }
        let q = lift(s.model.quaternionic_structure().and_then(QuaternionicStructure::new))?;
        let t = lift(qk_constancy(&s.w, &q, samples, seed))?;
        phi.copy_from_slice(&t.phi);
        *defect = t.constancy_defect;
        Ok(())
    })
}

/// Cayley modulus of a 4-dimensional subspace of `𝕆`.
///
/// # Safety
/// `sub` must be a live handle; `tau` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cohom_cayley_modulus(sub: *const CohomSubspace, tau: *mut f64) -> CohomStatus {
    guard(|| {
        let s = non_null(sub, "subspace")?;
        let tau = out_ptr(tau, "tau")?;
        if s.model.tag() != AlgebraTag::O {
            return Err(fail(
                CohomStatus::Unsupported,
                format!("Cayley modulus needs the Cayley model, got {}", s.model),
            ));
        }
        *tau = lift(cayley_modulus(&s.w))?;
        Ok(())
    })
}

/// Classifies the action whose singular orbit has normal space `sub`.
///
/// # Safety
/// `sub` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cohom_classify(
    sub: *const CohomSubspace,
    tol: f64,
    samples: usize,
    seed: u64,
    out: *mut *mut CohomRecord,
) -> CohomStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let s = non_null(sub, "subspace")?;
        let tol = lift(Tolerance::default().with_defect(tol))?;
        let inner = lift(classify_subspace(&s.model, &s.w.complement(), &tol, samples, seed))?;
        *out = boxed(CohomRecord { inner });
        Ok(())
    })
}

/// # Safety
/// `rec` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cohom_record_free(rec: *mut CohomRecord) {
    if !rec.is_null() {
        drop(Box::from_raw(rec));
    }
}

/// Codimension recorded in `rec`.
///
/// # Safety
/// `rec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cohom_record_codim(rec: *const CohomRecord, codim: *mut usize) -> CohomStatus {
    guard(|| {
        *out_ptr(codim, "codim")? = non_null(rec, "record")?.inner.codim;
        Ok(())
    })
}

/// Verdict class of `rec`.
///
/// # Safety
/// `rec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cohom_record_verdict(rec: *const CohomRecord, verdict: *mut CohomVerdict) -> CohomStatus {
    guard(|| {
        let v = match non_null(rec, "record")?.inner.verdict {
            Verdict::Transitive => CohomVerdict::Transitive,
            Verdict::FoliationHorosphere => CohomVerdict::FoliationHorosphere,
            Verdict::FoliationSolvable => CohomVerdict::FoliationSolvable,
            Verdict::TotallyGeodesic { .. } => CohomVerdict::TotallyGeodesic,
            Verdict::NonTotallyGeodesic { .. } => CohomVerdict::NonTotallyGeodesic,
            Verdict::NotCohomogeneityOne { .. } => CohomVerdict::NotCohomogeneityOne,
            Verdict::UnknownConstantAngle => CohomVerdict::UnknownConstantAngle,
        };
        *out_ptr(verdict, "verdict")? = v;
        Ok(())
    })
}

/// Moduli coordinate of a non-totally-geodesic verdict; `has_coord` is set
/// to false when the verdict carries none.
///
/// # Safety
/// `rec` must be a live handle; the out pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cohom_record_moduli_coord(
    rec: *const CohomRecord,
    coord: *mut f64,
    has_coord: *mut bool,
) -> CohomStatus {
    guard(|| {
        let c = non_null(rec, "record")?.inner.verdict.moduli_coord();
        let (coord, has) = (out_ptr(coord, "coord")?, out_ptr(has_coord, "has_coord")?);
        *has = c.is_some();
        *coord = c.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// JSON rendering of `rec`; free with `cohom_string_free`.
///
/// # Safety
/// `rec` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cohom_record_to_json(rec: *const CohomRecord, out: *mut *mut c_char) -> CohomStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let text = serde_json::to_string(&non_null(rec, "record")?.inner)
            .map_err(|e| fail(CohomStatus::InvalidInput, e.to_string()))?;
        *out = CString::new(text).map_err(|e| fail(CohomStatus::InvalidInput, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cohom_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
