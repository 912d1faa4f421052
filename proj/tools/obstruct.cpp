#include <cstdio>

int main() {
    std::puts("obstruct: CLI under construction");
    return 3;
}
