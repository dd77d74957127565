"""VSIDS activity heap for decision variable selection."""

from __future__ import annotations

RESCALE_LIMIT = 1e100


class VarOrder:
    """Indexed binary max-heap on activity; ties go to the lower variable index."""

    def __init__(self, num_vars: int, decay: float = 0.95):
        self.activity = [0.0] * (num_vars + 1)
        self.decay_factor = decay
        self.inc = 1.0
        self.heap = list(range(1, num_vars + 1))
        self.index = [-1] + list(range(num_vars))

    def __contains__(self, v):
        return self.index[v] >= 0

    def __len__(self):
        return len(self.heap)

    def _before(self, a, b):
        act = self.activity
        return act[a] > act[b] or (act[a] == act[b] and a < b)

    def _up(self, i):
        heap, index = self.heap, self.index
        v = heap[i]
        while i > 0:
            parent = (i - 1) >> 1
            p = heap[parent]
            if not self._before(v, p):
                break
            heap[i] = p
            index[p] = i
            i = parent
        heap[i] = v
        index[v] = i

    def _down(self, i):
        heap, index = self.heap, self.index
        n = len(heap)
        v = heap[i]
        while True:
            child = 2 * i + 1
            if child >= n:
                break
            if child + 1 < n and self._before(heap[child + 1], heap[child]):
                child += 1
            c = heap[child]
            if not self._before(c, v):
                break
            heap[i] = c
            index[c] = i
            i = child
        heap[i] = v
        index[v] = i

    def insert(self, v: int) -> None:
        if self.index[v] >= 0:
            return
        self.index[v] = len(self.heap)
        self.heap.append(v)
        self._up(self.index[v])

    def pop(self) -> int:
        heap, index = self.heap, self.index
        top = heap[0]
        last = heap.pop()
        index[top] = -1
        if heap:
            heap[0] = last
            index[last] = 0
            self._down(0)
        return top

    def bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.inc
        if act[v] > RESCALE_LIMIT:
            for u in range(1, len(act)):
                act[u] *= 1.0 / RESCALE_LIMIT
            self.inc *= 1.0 / RESCALE_LIMIT
        if self.index[v] >= 0:
            self._up(self.index[v])

    def decay(self) -> None:
        self.inc /= self.decay_factor
