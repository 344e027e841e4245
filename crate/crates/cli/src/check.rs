use crate::error::CliError;

/// Collects comparisons against published values.
#[derive(Default)]
pub struct Checker {
    compared: usize,
    failures: Vec<String>,
}

impl Checker {
    pub fn near(&mut self, label: impl AsRef<str>, got: f64, expected: f64, tol: f64) {
        self.compared += 1;
        // NaN never counts as close.
        let close = (got - expected).abs() <= tol;
        if !close {
            self.failures.push(format!(
                "{}: got {got}, expected {expected} (tolerance {tol:e})",
                label.as_ref()
            ));
        }
    }

    pub fn equal<T: PartialEq + std::fmt::Debug>(
        &mut self,
        label: impl AsRef<str>,
        got: T,
        expected: T,
    ) {
        self.compared += 1;
        if got != expected {
            self.failures.push(format!(
                "{}: got {got:?}, expected {expected:?}",
                label.as_ref()
            ));
        }
    }

    /// Summary line, or the failures. Comparing nothing counts as failure.
    pub fn finish(self) -> Result<String, CliError> {
        if self.compared == 0 {
            return Err(CliError::Check(vec![
                "no reference values for these inputs".into(),
            ]));
        }
        if self.failures.is_empty() {
            Ok(format!(
                "check passed: {} values within tolerance",
                self.compared
            ))
        } else {
            Err(CliError::Check(self.failures))
        }
    }
}
