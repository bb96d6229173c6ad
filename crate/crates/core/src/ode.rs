//! Adaptive Dormand–Prince 5(4) stepping for planar autonomous systems.

pub type State = [f64; 2];

// Butcher tableau (Dormand & Prince 1980); the nodes c_i are unused for autonomous fields.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b_hat (error weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy(y: State, h: f64, terms: &[(f64, State)]) -> State {
    let mut out = y;
    for &(c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            h_max: 0.5,
        }
    }
}

/// One Dormand–Prince step of signed size `h`: returns the 5th-order solution
/// and the embedded error estimate.
pub fn dopri_step<F: Fn(State) -> State>(f: &F, y: State, h: f64) -> (State, State) {
    let k1 = f(y);
    let k2 = f(axpy(y, h, &[(A21, k1)]));
    let k3 = f(axpy(y, h, &[(A31, k1), (A32, k2)]));
    let k4 = f(axpy(y, h, &[(A41, k1), (A42, k2), (A43, k3)]));
    let k5 = f(axpy(y, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]));
    let k6 = f(axpy(
        y,
        h,
        &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
    ));
    let y5 = axpy(y, h, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
    let k7 = f(y5);
    let err = axpy(
        [0.0, 0.0],
        h,
        &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)],
    );
    (y5, err)
}

/// Adaptive integrator state. `direction` is +1 for forward and -1 for backward time.
pub struct Stepper<F> {
    f: F,
    tol: Tolerances,
    pub t: f64,
    pub y: State,
    h: f64,
    direction: f64,
}

impl<F: Fn(State) -> State> Stepper<F> {
    pub fn new(f: F, y0: State, direction: f64, tol: Tolerances) -> Self {
        Self {
            f,
            tol,
            t: 0.0,
            y: y0,
            h: 1e-3,
            direction: direction.signum(),
        }
    }

    /// Advances by one accepted step; returns `false` if the step size collapsed.
    pub fn advance(&mut self) -> bool {
        loop {
            let h = self.direction * self.h;
            let (y_new, err) = dopri_step(&self.f, self.y, h);
            let mut norm = 0.0f64;
            for i in 0..2 {
                let scale =
                    self.tol.atol + self.tol.rtol * self.y[i].abs().max(y_new[i].abs());
                norm = norm.max((err[i] / scale).abs());
            }
            if !norm.is_finite() {
                self.h *= 0.1;
                if self.h < 1e-14 {
                    return false;
                }
                continue;
            }
            let factor = if norm == 0.0 {
                5.0
            } else {
                (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            if norm <= 1.0 {
                self.t += h;
                self.y = y_new;
                self.h = (self.h * factor).min(self.tol.h_max);
                return true;
            }
            self.h *= factor;
            if self.h < 1e-14 {
                return false;
            }
        }
    }

    /// Integrates from the current state by exactly `h` (signed) without adapting.
    /// Used to locate section crossings inside an accepted step.
    pub fn probe(&self, from: State, h: f64) -> State {
        let n = ((h.abs() / (0.25 * self.tol.h_max)).ceil() as usize).max(1);
        let sub = h / n as f64;
        let mut y = from;
        for _ in 0..n {
            y = dopri_step(&self.f, y, sub).0;
        }
        y
    }
}
