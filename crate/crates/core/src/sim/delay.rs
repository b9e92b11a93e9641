/// Integer-step FIFO delay.
///
/// `process` at step `n` returns the value passed to `process` at step
/// `n - capacity`, or the pre-fill value while `n < capacity`. A zero-capacity
/// line is a pass-through.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayLine {
    buffer: Vec<f64>,
    cursor: usize,
}

impl DelayLine {
    pub fn new(capacity: usize, fill: f64) -> Self {
        DelayLine {
            buffer: vec![fill; capacity],
            cursor: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.buffer.len()
    }

    /// Overwrites every stored sample, e.g. to prime a line with the first
    /// measurement taken at rest.
    pub fn fill(&mut self, value: f64) {
        self.buffer.iter_mut().for_each(|s| *s = value);
    }

    /// Pushes `input` and returns the sample delayed by `capacity` steps.
    pub fn process(&mut self, input: f64) -> f64 {
        if self.buffer.is_empty() {
            return input;
        }
        let out = std::mem::replace(&mut self.buffer[self.cursor], input);
        self.cursor += 1;
        if self.cursor == self.buffer.len() {
            self.cursor = 0;
        }
        out
    }
}
