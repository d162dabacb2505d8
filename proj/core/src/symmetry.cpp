#include "onedigit/symmetry.hpp"

#include <stdexcept>

#include "onedigit/text.hpp"

namespace onedigit {

Rational f_n_10(int n) {
  if (n < 0) throw std::invalid_argument("f_n_10: n must be >= 0");
  BigInt sum = 0;
  BigInt power = 1;
  for (int i = 0; i <= n; ++i) {
    sum += power;
    power *= 10;
  }
  return Rational(std::move(sum));
}

Expr instantiate(std::string_view pattern, int a) {
  if (a < 1 || a > 9) throw std::invalid_argument("family digit must be in 1..9");
  std::string text(pattern);
  for (char& c : text) {
    if (c == 'a') c = static_cast<char>('0' + a);
  }
  return parse(text, a);
}

Expr Family::build(int a) const { return instantiate(pattern, a); }

namespace {

std::vector<int> digits(int lo, int hi) {
  std::vector<int> out;
  for (int a = lo; a <= hi; ++a) out.push_back(a);
  return out;
}

std::function<Rational(int)> constant(std::int64_t v) {
  return [v](int) { return Rational(v); };
}

}  // namespace

std::vector<Family> builtin_families() {
  const std::vector<int> all = digits(1, 9);
  const std::vector<int> even = {2, 4, 6, 8};
  const std::vector<int> odd = {1, 3, 5, 7, 9};
  return {
      {"FIVE", "(aa - a)/(a + a)", constant(5), all},
      {"FIFTYFIVE", "(aaa - a)/(a + a)", constant(55), all},
      {"SIX", "(aa + a)/(a + a)", constant(6), all},
      {"FIFTYSIX", "(aaa + a)/(a + a)", constant(56), all},
      {"ELEVEN_A", "aa/a", constant(11), all},
      {"ELEVEN_B", "(aa + aa)/(a + a)", constant(11), all},
      {"THIRTYSEVEN", "aaa/(a + a + a)", constant(37), all},
      {"HUNDRED", "(aaa - aa)/(a + a)", constant(100), all},
      {"HUNDRED_ONE", "aaaa/aa", constant(101), all},
      {"ONE_ELEVEN", "aaa/a", constant(111), digits(2, 9)},
      {"NINE_TWENTYFIVE", "(aaaaa - aa)/(aa + a)", constant(925), all},
      {"NINE_TWENTYSIX", "(aaaaa + a)/(aa + a)", constant(926), all},
      {"EVEN_HALF", "(a * a)/(a + a)", [](int a) { return Rational(BigInt(a), BigInt(2)); }, even},
      {"ODD_MINUS", "(a * a - a)/(a + a)", [](int a) { return Rational(BigInt(a - 1), BigInt(2)); }, odd},
      {"ODD_PLUS", "(a * a + a)/(a + a)", [](int a) { return Rational(BigInt(a + 1), BigInt(2)); }, odd},
      {"CASCADE_NEXT", "aaa + aaa/a", [](int a) { return Rational(111 * (a + 1)); }, digits(1, 8)},
      {"CASCADE_MIX", "aaa + aaaa/aa", [](int a) { return Rational(111 * a + 101); }, digits(1, 8)},
  };
}

FamilyResult check_family(const Family& f, const Caps& caps) {
  for (int a : f.domain) {
    EvalOutcome actual = evaluate(f.build(a), caps);
    Rational expected = f.expected(a);
    if (!actual || actual.value() != expected) return FamilyFail{a, actual, expected};
  }
  return FamilyPass{};
}

}  // namespace onedigit
