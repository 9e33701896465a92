#include <iostream>
int main() { std::cout << "dforge: stages not wired yet\n"; return 0; }
