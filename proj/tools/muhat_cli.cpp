#include <cstdio>

#include "muhat/muhat.hpp"

int main() {
    std::puts("muhat cli placeholder");
    return 0;
}
