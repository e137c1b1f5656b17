# two states with the same move
ts 3
0 2
1 2
end
