#ifndef TAMEPI_WORD_HPP_
#define TAMEPI_WORD_HPP_

// Freely reduced words in the bouquet generators a1..ar, and automorphisms
// of the free group of rank r.
//
// A letter is a nonzero int: +i stands for a_i, -i for a_i^-1.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdlib>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"

namespace tamepi {

  using Letter = int;

  class Word {
   public:
    explicit Word(std::size_t rank = 1) : rank_(rank) {
      if (rank == 0) {
        throw Error("word rank must be positive");
      }
    }

    Word(std::size_t rank, std::vector<Letter> letters) : Word(rank) {
      for (Letter l : letters) {
        check_letter(l);
      }
      letters_ = std::move(letters);
      reduce_in_place();
    }

    static Word generator(std::size_t rank, std::size_t i) {
      return Word(rank, {static_cast<Letter>(i)});
    }

    std::size_t rank() const noexcept {
      return rank_;
    }
    std::span<Letter const> letters() const noexcept {
      return letters_;
    }
    std::size_t size() const noexcept {
      return letters_.size();
    }
    bool empty() const noexcept {
      return letters_.empty();
    }

    Word inverse() const {
      Word w(rank_);
      w.letters_.assign(letters_.rbegin(), letters_.rend());
      for (Letter& l : w.letters_) {
        l = -l;
      }
      return w;
    }

    friend Word operator*(Word const& a, Word const& b) {
      check_ranks(a, b);
      Word w = a;
      for (Letter l : b.letters_) {
        w.push(l);
      }
      return w;
    }

    Word& operator*=(Word const& b) {
      check_ranks(*this, b);
      for (Letter l : b.letters_) {
        push(l);
      }
      return *this;
    }

    // Integer power; negative exponents invert.
    Word pow(long n) const {
      Word base = n < 0 ? inverse() : *this;
      Word r(rank_);
      for (long k = 0; k < std::labs(n); ++k) {
        r *= base;
      }
      return r;
    }

    friend bool operator==(Word const&, Word const&) = default;

    // "a1 a2^-1 a1", with "1" for the empty word.
    std::string to_string() const {
      if (letters_.empty()) {
        return "1";
      }
      std::string s;
      for (Letter l : letters_) {
        if (!s.empty()) {
          s += ' ';
        }
        s += letter_string(l);
      }
      return s;
    }

    // Same alphabet as to_string but runs of a repeated block are folded
    // into "(block)^k" or "a1^k". Deterministic, and parse() inverts it.
    std::string to_compact_string() const {
      if (letters_.empty()) {
        return "1";
      }
      return compact(letters_);
    }

    // Accepts the output of to_string and to_compact_string: space separated
    // terms, each "a<i>" or a parenthesised subword, optionally followed by
    // "^<int>". "1" denotes the empty word.
    static Word parse(std::size_t rank, std::string_view s) {
      Parser p{rank, s, 0};
      Word   w = p.sequence();
      p.skip_space();
      if (p.pos != s.size()) {
        throw Error("unexpected '" + std::string(1, s[p.pos]) + "' in word \""
                    + std::string(s) + "\"");
      }
      return w;
    }

   private:
    static void check_ranks(Word const& a, Word const& b) {
      if (a.rank_ != b.rank_) {
        throw Error("rank mismatch: " + std::to_string(a.rank_) + " vs "
                    + std::to_string(b.rank_));
      }
    }

    void check_letter(Letter l) const {
      if (l == 0 || static_cast<std::size_t>(std::abs(l)) > rank_) {
        throw Error("generator index " + std::to_string(std::abs(l))
                    + " out of range for rank " + std::to_string(rank_));
      }
    }

    void push(Letter l) {
      if (!letters_.empty() && letters_.back() == -l) {
        letters_.pop_back();
      } else {
        letters_.push_back(l);
      }
    }

    void reduce_in_place() {
      std::vector<Letter> in = std::move(letters_);
      letters_.clear();
      for (Letter l : in) {
        push(l);
      }
    }

    static std::string letter_string(Letter l) {
      std::string s = "a" + std::to_string(std::abs(l));
      if (l < 0) {
        s += "^-1";
      }
      return s;
    }

    static std::string compact(std::span<Letter const> w) {
      std::string out;
      std::size_t i = 0;
      while (i < w.size()) {
        // Longest covered stretch wins; shorter period on ties.
        std::size_t best_len = 0, best_reps = 1;
        for (std::size_t len = 1; i + 2 * len <= w.size(); ++len) {
          std::size_t reps = 1;
          while (i + (reps + 1) * len <= w.size()
                 && std::equal(w.begin() + i,
                               w.begin() + i + len,
                               w.begin() + i + reps * len)) {
            ++reps;
          }
          if (reps >= 2 && len * reps > best_len * best_reps) {
            best_len  = len;
            best_reps = reps;
          }
        }
        if (!out.empty()) {
          out += ' ';
        }
        if (best_reps < 2) {
          out += letter_string(w[i]);
          ++i;
          continue;
        }
        if (best_len == 1) {
          long e = w[i] > 0 ? static_cast<long>(best_reps)
                            : -static_cast<long>(best_reps);
          out += "a" + std::to_string(std::abs(w[i])) + "^" + std::to_string(e);
        } else {
          out += "(" + compact(w.subspan(i, best_len)) + ")^"
                 + std::to_string(best_reps);
        }
        i += best_len * best_reps;
      }
      return out;
    }

    struct Parser {
      std::size_t      rank;
      std::string_view s;
      std::size_t      pos;

      void skip_space() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) {
          ++pos;
        }
      }

      [[noreturn]] void fail(std::string const& msg) const {
        throw Error(msg + " at offset " + std::to_string(pos) + " in word \""
                    + std::string(s) + "\"");
      }

      long integer() {
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
          ++pos;
        }
        std::size_t digits = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
          ++pos;
        }
        if (pos == digits) {
          fail("expected integer");
        }
        return std::stol(std::string(s.substr(start, pos - start)));
      }

      Word sequence() {
        Word w(rank);
        bool any = false;
        for (;;) {
          skip_space();
          if (pos == s.size() || s[pos] == ')') {
            break;
          }
          w *= term();
          any = true;
        }
        if (!any) {
          fail("empty word");
        }
        return w;
      }

      Word term() {
        Word base(rank);
        if (s[pos] == '(') {
          ++pos;
          base = sequence();
          skip_space();
          if (pos == s.size() || s[pos] != ')') {
            fail("expected ')'");
          }
          ++pos;
        } else if (s[pos] == 'a') {
          ++pos;
          long i = integer();
          if (i < 1 || static_cast<std::size_t>(i) > rank) {
            fail("generator index out of range");
          }
          base = Word::generator(rank, static_cast<std::size_t>(i));
        } else if (s[pos] == '1') {
          ++pos;
        } else {
          fail("unexpected character");
        }
        if (pos < s.size() && s[pos] == '^') {
          ++pos;
          return base.pow(integer());
        }
        return base;
      }
    };

    std::size_t         rank_;
    std::vector<Letter> letters_;
  };

  inline Word reduce(std::size_t rank, std::vector<Letter> letters) {
    return Word(rank, std::move(letters));
  }

  // u w u^-1
  inline Word conj(Word const& w, Word const& u) {
    return u * w * u.inverse();
  }

  // Endomorphism of the free group given by the images of a1..ar.
  class TupleAutomorphism {
   public:
    TupleAutomorphism(std::size_t rank, std::vector<Word> images)
        : rank_(rank), images_(std::move(images)) {
      if (images_.size() != rank_) {
        throw Error("automorphism of rank " + std::to_string(rank_) + " needs "
                    + std::to_string(rank_) + " images, got "
                    + std::to_string(images_.size()));
      }
      for (Word const& w : images_) {
        if (w.rank() != rank_) {
          throw Error("rank mismatch: image of rank " + std::to_string(w.rank())
                      + " in automorphism of rank " + std::to_string(rank_));
        }
      }
    }

    static TupleAutomorphism identity(std::size_t rank) {
      std::vector<Word> images;
      for (std::size_t i = 1; i <= rank; ++i) {
        images.push_back(Word::generator(rank, i));
      }
      return TupleAutomorphism(rank, std::move(images));
    }

    std::size_t rank() const noexcept {
      return rank_;
    }
    std::vector<Word> const& images() const noexcept {
      return images_;
    }
    Word const& image(std::size_t i) const {
      return images_.at(i - 1);
    }

    Word apply(Word const& w) const {
      if (w.rank() != rank_) {
        throw Error("rank mismatch: word of rank " + std::to_string(w.rank())
                    + " under automorphism of rank " + std::to_string(rank_));
      }
      Word out(rank_);
      for (Letter l : w.letters()) {
        Word const& img = images_[static_cast<std::size_t>(std::abs(l)) - 1];
        out *= l > 0 ? img : img.inverse();
      }
      return out;
    }

    friend bool operator==(TupleAutomorphism const&, TupleAutomorphism const&)
        = default;

   private:
    std::size_t       rank_;
    std::vector<Word> images_;
  };

  // a_i -> q_i a_i q_i^-1
  class ConjugatorAction {
   public:
    ConjugatorAction(std::size_t rank, std::vector<Word> conjugators)
        : rank_(rank), conjugators_(std::move(conjugators)) {
      if (conjugators_.size() != rank_) {
        throw Error("conjugator action of rank " + std::to_string(rank_)
                    + " needs " + std::to_string(rank_) + " conjugators, got "
                    + std::to_string(conjugators_.size()));
      }
      for (Word const& q : conjugators_) {
        if (q.rank() != rank_) {
          throw Error("rank mismatch: conjugator of rank " + std::to_string(q.rank())
                      + " in action of rank " + std::to_string(rank_));
        }
      }
    }

    static ConjugatorAction identity(std::size_t rank) {
      return ConjugatorAction(rank, std::vector<Word>(rank, Word(rank)));
    }

    std::size_t rank() const noexcept {
      return rank_;
    }
    std::vector<Word> const& conjugators() const noexcept {
      return conjugators_;
    }
    Word const& conjugator(std::size_t i) const {
      return conjugators_.at(i - 1);
    }
    Word image(std::size_t i) const {
      return conj(Word::generator(rank_, i), conjugators_.at(i - 1));
    }
    bool is_identity() const {
      for (Word const& q : conjugators_) {
        if (!q.empty()) {
          return false;
        }
      }
      return true;
    }

    TupleAutomorphism as_automorphism() const {
      std::vector<Word> images;
      for (std::size_t i = 1; i <= rank_; ++i) {
        images.push_back(image(i));
      }
      return TupleAutomorphism(rank_, std::move(images));
    }

    Word apply(Word const& w) const {
      return as_automorphism().apply(w);
    }

    friend bool operator==(ConjugatorAction const&, ConjugatorAction const&) = default;

   private:
    std::size_t       rank_;
    std::vector<Word> conjugators_;
  };

  // compose(a, b)(w) = a(b(w)): b acts first.
  inline TupleAutomorphism compose(TupleAutomorphism const& a,
                                   TupleAutomorphism const& b) {
    if (a.rank() != b.rank()) {
      throw Error("rank mismatch: " + std::to_string(a.rank()) + " vs "
                  + std::to_string(b.rank()));
    }
    std::vector<Word> images;
    images.reserve(b.rank());
    for (Word const& w : b.images()) {
      images.push_back(a.apply(w));
    }
    return TupleAutomorphism(a.rank(), std::move(images));
  }

  inline TupleAutomorphism compose(ConjugatorAction const& a, ConjugatorAction const& b) {
    return compose(a.as_automorphism(), b.as_automorphism());
  }

  inline TupleAutomorphism power(TupleAutomorphism const& a, unsigned long n) {
    TupleAutomorphism r = TupleAutomorphism::identity(a.rank());
    for (unsigned long k = 0; k < n; ++k) {
      r = compose(a, r);
    }
    return r;
  }

  inline TupleAutomorphism power(ConjugatorAction const& a, unsigned long n) {
    return power(a.as_automorphism(), n);
  }

}  // namespace tamepi

#endif  // TAMEPI_WORD_HPP_
