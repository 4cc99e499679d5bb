#include <cstdio>

#include "talg/talg.hpp"

int main() { std::puts(TALG_VERSION_STRING); return 0; }
