// Copyright (C) 2026 The Spectra Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace spectra {

/// Fixed-capacity FIFO. push() is O(1) and evicts the oldest element once
/// full. Index 0 is the oldest element.
template <typename T>
class RingBuffer {
public:
    explicit RingBuffer(std::size_t capacity) : slots_(capacity) {
        if (capacity == 0) {
            throw std::invalid_argument("ring buffer capacity must be positive");
        }
    }

    void push(T value) {
        slots_[(head_ + size_) % slots_.size()] = std::move(value);
        if (size_ < slots_.size()) {
            ++size_;
        } else {
            head_ = (head_ + 1) % slots_.size();
        }
    }

    void clear() {
        head_ = 0;
        size_ = 0;
    }

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return slots_.size(); }
    bool empty() const { return size_ == 0; }

    const T& operator[](std::size_t i) const {
        assert(i < size_);
        return slots_[(head_ + i) % slots_.size()];
    }
    const T& front() const { return (*this)[0]; }
    const T& back() const { return (*this)[size_ - 1]; }

private:
    std::vector<T> slots_;
    std::size_t head_ = 0;
    std::size_t size_ = 0;
};

}  // namespace spectra
