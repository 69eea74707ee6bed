#pragma once

namespace nahm {

/// eps_{abc} on indices 0..2, eps(0,1,2) = 1.
inline double eps3(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0.0;
  return ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
}

/// eps_{ijkl} on indices 0..3, eps(0,1,2,3) = 1; index 3 is y, so
/// eps_{abcy} = eps_{abc}.
inline double eps4(int i, int j, int k, int l) {
  const int p[4] = {i, j, k, l};
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (p[a] == p[b]) return 0.0;
  int inv = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if (p[a] > p[b]) ++inv;
  return (inv % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace nahm
