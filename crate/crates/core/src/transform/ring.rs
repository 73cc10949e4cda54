/// Fixed-capacity history; `get(0)` is the newest value.
#[derive(Debug, Clone)]
pub(crate) struct Ring {
    buf: Vec<f64>,
    head: usize,
}

impl Ring {
    pub(crate) fn new(capacity: usize) -> Self {
        Ring {
            buf: vec![0.0; capacity.max(1)],
            head: 0,
        }
    }

    #[inline]
    pub(crate) fn push(&mut self, value: f64) {
        self.head += 1;
        if self.head == self.buf.len() {
            self.head = 0;
        }
        self.buf[self.head] = value;
    }

    #[inline]
    pub(crate) fn get(&self, lag: usize) -> f64 {
        debug_assert!(lag < self.buf.len());
        let cap = self.buf.len();
        self.buf[(self.head + cap - lag) % cap]
    }
}
